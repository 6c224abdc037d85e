"""Regenerate catalog/ and fixtures/ in canonical set-file form."""

from __future__ import annotations

import pathlib

from lfwsets import catalog
from lfwsets.field import FieldElement, default_params, u_map
from lfwsets.setfile import SetFile, write_setfile
from lfwsets.sets import ClopenSet

ROOT = pathlib.Path(__file__).resolve().parent.parent


def entry_file(name, p, c):
    e = catalog.build(name, p, c)
    return SetFile(e.params, dict(zip(e.set_names(), e.family)))


def main():
    cat = ROOT / "catalog"
    fix = ROOT / "fixtures"
    cat.mkdir(exist_ok=True)
    fix.mkdir(exist_ok=True)
    for stem, p, c in [("p2", 2, 1), ("p3", 3, 1), ("q4", 2, 2), ("p5", 5, 1)]:
        write_setfile(entry_file("shannon", p, c), cat / f"shannon_{stem}.lfw")
        write_setfile(entry_file("unit-scaling", p, c), cat / f"unit_scaling_{stem}.lfw")
    write_setfile(entry_file("prime-ideal", 2, 1), fix / "prime_ideal_p2.lfw")
    write_setfile(entry_file("dilated-shannon", 2, 1), fix / "sphere4_p2.lfw")
    write_setfile(entry_file("shannon-drop-one", 3, 1), fix / "shannon_drop_p3.lfw")

    P = default_params(2)
    x = u_map(1, P)
    one = FieldElement.one(P)
    sets = {
        "Parent": ClopenSet.ball(x, 0),
        "C1": ClopenSet.ball(x, 1),
        "C2": ClopenSet.ball(x + one, 1),
        "Big": ClopenSet.ball(FieldElement.uniformizer_power(P, -2), -1),
    }
    write_setfile(SetFile(P, sets), fix / "superwavelet_p2.lfw")

    sets = {"W": ClopenSet.ball(FieldElement.uniformizer_power(P, 1), 2),
            "Sphere": ClopenSet.sphere(P, 1)}
    write_setfile(SetFile(P, sets), fix / "decomposability_p2.lfw")

    sets = {"S": ClopenSet.ideal(P, 1) | ClopenSet.ball(x, 0)}
    write_setfile(SetFile(P, sets), fix / "overlapping_scaling_p2.lfw")


if __name__ == "__main__":
    main()
