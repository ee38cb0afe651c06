"""Regenerate the golden dumps under tests/golden after an intentional format change."""
from pathlib import Path

from folichar import simplicial as sx
from folichar.weil import chern_c, make_gl, transgression_h, weil_context, wo_element

OUT = Path(__file__).resolve().parents[1] / "tests" / "golden"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for q in (1, 2, 3):
        ctx = weil_context(make_gl(q))
        for i in range(1, q + 1):
            (OUT / f"c_q{q}_i{i}.txt").write_text(chern_c(ctx, i).dump())
            if i % 2:
                (OUT / f"h_q{q}_i{i}.txt").write_text(transgression_h(ctx, i).dump())
    hc = sx.char_cochain(wo_element([("h", 1), ("c", 1)]), 1, 1, "local")[1]
    (OUT / "gv_level1_local.txt").write_text(hc.dump())
    print(f"wrote {len(list(OUT.glob('*.txt')))} files to {OUT}")


if __name__ == "__main__":
    main()
