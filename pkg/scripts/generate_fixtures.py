"""Render the canonical representation fixtures under ``fixtures/``.

Single source of truth: the family builders in ``families.py``. The
semistable pair uses the explicit symmetric block B = I_2 (no random draw and
no conjugation), so the files read cleanly and stay stable when the
random conjugators change.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, List, Optional, Tuple

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from families import (  # noqa: E402
    gen_briefly_unstable_family,
    gen_example62,
    gen_example62_sign,
    gen_semistable_family,
)
from inertia import InertiaRep, dump_representation  # noqa: E402
from monodromy import write_text_atomic  # noqa: E402

FIXTURES_DIR = ROOT / "fixtures"

IDENTITY_B = [[1, 0], [0, 1]]

FIXTURES: Tuple[Tuple[str, Callable[[], InertiaRep]], ...] = (
    ("semistable_d2.json", lambda: gen_semistable_family(2, seed=0, b=IDENTITY_B)),
    ("briefly_unstable_d2.json", lambda: gen_briefly_unstable_family(2, seed=0, b=IDENTITY_B)),
    ("example62_ell3.json", lambda: gen_example62(3, 1)),
    ("example62_ell5.json", lambda: gen_example62(5, 1)),
    ("example62_sign.json", lambda: gen_example62_sign(1)),
)


def write_fixtures(out_dir: Path) -> List[Path]:
    written = []
    for name, build in FIXTURES:
        path = out_dir / name
        write_text_atomic(path, dump_representation(build()))
        written.append(path)
    return written


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", type=Path, default=FIXTURES_DIR)
    args = parser.parse_args(argv)
    written = write_fixtures(args.out_dir)
    print(f"Wrote {len(written)} fixtures to {args.out_dir}.")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
