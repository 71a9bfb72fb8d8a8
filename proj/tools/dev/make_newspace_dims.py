"""Writes tests/data/newspace_dims.csv: dim S_2^new(Gamma_0(d)) from PARI for d <= 1000."""
import pathlib

import cypari2

pari = cypari2.Pari()
out = pathlib.Path(__file__).resolve().parents[2] / "tests" / "data" / "newspace_dims.csv"
lines = ["# level,dim"]
for d in range(1, 1001):
    lines.append(f"{d},{int(pari.mfdim([d, 2], 0))}")
out.write_text("\n".join(lines) + "\n")
