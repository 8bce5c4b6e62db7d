"""Regenerate the two attainability surfaces over the marginal-entropy square.

For a pair of sites this tabulates the maximum joint linear entropy allowed
by plain subadditivity and by the correlated strengthening, plus the contour
where the two caps cross.  The closed forms are re-validated against a
root-finding pass before anything is written; a residual above 1e-8 aborts.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from bloch_lab import sweep_figA
from bloch_lab.io import figA_to_jsonable, write_figA_csv


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="data")
    ap.add_argument("--dims", default="2,2", help="the two site dimensions")
    ap.add_argument("--resolution", type=int, default=101)
    ap.add_argument("--deterministic", action="store_true")
    args = ap.parse_args()

    dims = tuple(int(x) for x in args.dims.split(","))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    # ------------------------------------------------------------------
    # sweep (self-validating: raises NumericError on closed-form drift)
    data = sweep_figA(dims=dims, resolution=args.resolution)
    print(f"surface validation residuals: subadd {data.subadd_validation:.2e}, "
          f"correlated {data.gen_pseudo_validation:.2e}")

    path = out_dir / "figA_surfaces.csv"
    write_figA_csv(data, path, deterministic=args.deterministic)
    print(f"wrote {path} [{args.resolution}^2 grid]")

    # the JSON sidecar carries the crossing contour, which has no CSV column
    import json

    side = out_dir / "figA_surfaces.json"
    side.write_text(json.dumps(figA_to_jsonable(data), indent=2))
    print(f"wrote {side} [{len(data.contour)} contour points]")


if __name__ == "__main__":
    main()
