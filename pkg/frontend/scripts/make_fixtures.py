"""Regenerate the solver-produced CSV fixtures used by the frontend tests.

    python frontend/scripts/make_fixtures.py

Small point counts keep the fixtures light; the schema is identical to the
full-resolution datasets.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[2] / "src"))

from floquet_barrier.figures_data import FIGURE_IDS, figure_dataset  # noqa: E402

OUT = pathlib.Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def main() -> None:
    for figure_id in FIGURE_IDS:
        paths = figure_dataset(figure_id, str(OUT), points=3, jobs=4)
        print(figure_id, "->", ", ".join(paths))


if __name__ == "__main__":
    main()
