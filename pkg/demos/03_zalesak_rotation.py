"""Solid-body rotation of Zalesak's slotted disk, cone and hump.

One revolution (T = 2 pi) at CFL 0.2. The default 100 x 100 grid runs in about
half a minute per scheme; pass a size on the command line for finer grids.

    python demos/03_zalesak_rotation.py 200
"""
import sys

from hybridfv.config import parse_config
from hybridfv.experiments import run_case

n = int(sys.argv[1]) if len(sys.argv) > 1 else 100
for scheme in ("adm", "weno5", "hybrid"):
    r = run_case(parse_config(f"problem: rotation-zalesak\nscheme: {scheme}\nn_cells: {n}\n"))
    T = r.config.t_end
    print(
        f"{scheme:7s} L1 {r.metric('l1_error', T):.4e}"
        f"  min {r.metric('min', T):+.2e}  max-1 {r.metric('max', T) - 1:+.2e}"
    )
