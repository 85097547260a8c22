"""Print the projected fingertip workspace area of every finger.

The thumb sweeps its base plate as well as its flexion joints, so its
reachable area dwarfs the fixed-mount fingers. Run with a higher
resolution for smoother hulls (cost grows with the cube of resolution for
the thumb).
"""

import argparse
import time
from pathlib import Path

from rotograb import default_geometry, load_geometry, workspace_report
from rotograb.workspace import cloud_to_csv


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--resolution", type=int, default=25)
    parser.add_argument("--config", default=None, help="geometry config JSON")
    parser.add_argument("--export-dir", default=None, help="write cloud CSVs here")
    args = parser.parse_args()

    geometry = load_geometry(args.config) if args.config else default_geometry()
    start = time.perf_counter()
    report, clouds = workspace_report(geometry, resolution=args.resolution)
    elapsed = time.perf_counter() - start

    print(f"resolution {args.resolution}, sampled in {elapsed:.2f} s")
    print(f"{'finger':<8} {'area mm^2':>12} {'share':>7}")
    total = sum(report.areas.values())
    for finger, area in report.ranked():
        flag = " (degenerate)" if report.degenerate[finger] else ""
        print(f"{finger:<8} {area * 1e6:>12.2f} {area / total:>6.1%}{flag}")

    if args.export_dir:
        out = Path(args.export_dir)
        out.mkdir(parents=True, exist_ok=True)
        for finger, cloud in clouds.items():
            path = out / f"workspace_{finger}.csv"
            path.write_text(cloud_to_csv(cloud))
            print(f"wrote {path}")


if __name__ == "__main__":
    main()
