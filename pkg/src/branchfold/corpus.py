"""The installable fixture corpus: charts, cocycles, actions and angle tables."""

from __future__ import annotations

import random
from pathlib import Path

from . import fixtures as fx
from .action import SimplicialAction
from .charts import disk_chart, fig2_chart
from .io import Workspace, angles_to_json, cocycle_to_json, complex_to_json, instance_to_json
from .presentation import SingularComponent

DISK_MODELS = ((2, 1), (3, 2), (5, 3))
ANGLE_TABLE = ("1/3 tau", "2/3 tau", "1 tau", "1/7 tau")


def install(root: Path | str, seed: int = 0) -> Workspace:
    ws = Workspace(root)
    octa = fx.octahedron()
    ws.save("octa.json", complex_to_json(octa))
    ws.save("poles.json", {"kind": "subcomplex", "simplices": [[5], [6]]})
    ws.save("equator.json", {"kind": "subcomplex", "simplices": [[1, 3], [3, 2], [2, 4], [4, 1]]})
    for h, k in DISK_MODELS:
        ws.save(f"fig1-{h}-{k}.chart.json", disk_chart(h, k))
    ws.save("fig2.chart.json", fig2_chart())
    ws.save("fig3.json", cocycle_to_json(fx.fig3_cocycle()))
    ws.save("pole.json", cocycle_to_json(fx.pole_cocycle()))
    ws.save("east-west.json", cocycle_to_json(fx.east_west_cocycle()))
    ws.save("random-cocycle.json", cocycle_to_json(fx.random_cocycle(random.Random(seed))))
    names = {"rotation": "rot", "antipodal": "antipodal", "reflection": "reflection"}
    for key, gens in fx.octahedron_actions().items():
        ws.save(f"octa-{names[key]}.json",
                SimplicialAction.from_generators(octa, gens, [key]))
    ws.save("angles.json", angles_to_json(list(ANGLE_TABLE)))
    ws.save("s2-two-orbifold-points.json",
            instance_to_json(octa, [SingularComponent(((5,),), 2, 1),
                                    SingularComponent(((6,),), 2, 1)]))
    ws.save("s2-two-3-2-points.json",
            instance_to_json(octa, [SingularComponent(((5,),), 3, 2),
                                    SingularComponent(((6,),), 3, 2)]))
    ws.save("s3.json", instance_to_json(fx.sphere3(), []))
    return ws
