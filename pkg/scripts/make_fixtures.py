"""Regenerate the CSV fixtures bundled in src/heatpanel/data/."""
from pathlib import Path

from heatpanel.panel import emit_panel_csv
from heatpanel.synth import separable_panel

DATA = Path(__file__).resolve().parents[1] / "src" / "heatpanel" / "data"


def main():
    path = DATA / "separable.csv"
    path.write_text(emit_panel_csv(separable_panel()), encoding="utf-8", newline="\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
