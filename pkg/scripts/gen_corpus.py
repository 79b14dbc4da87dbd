#!/usr/bin/env python3
"""Emit a directory of synthetic manifests for ad-hoc benchmarking.

Usage: python scripts/gen_corpus.py OUT_DIR [count] [seed]
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from pupsec.synth import generate_manifest_text  # noqa: E402


def main() -> int:
    if len(sys.argv) < 2:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    out_dir = Path(sys.argv[1])
    count = int(sys.argv[2]) if len(sys.argv) > 2 else 100
    base_seed = int(sys.argv[3]) if len(sys.argv) > 3 else 0
    out_dir.mkdir(parents=True, exist_ok=True)
    for i in range(count):
        text = generate_manifest_text(base_seed + i)
        (out_dir / f"synthetic_{base_seed + i:05d}.pp").write_text(text, encoding="utf-8")
    print(f"wrote {count} manifests to {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
