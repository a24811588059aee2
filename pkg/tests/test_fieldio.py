import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from korteweg import fieldio
from korteweg.solver import CartesianGrid, ComplexField


def test_three_samples_give_a_four_line_file(tmp_path):
    p = fieldio.write_amplitude_csv([1.5, 2.0, 2.5], [0.1, -0.2, 0.3], tmp_path / "a.csv")
    text = p.read_bytes().decode("utf-8")
    assert text.endswith("\n") and text.count("\n") == 4
    assert text.splitlines()[0] == "y,F"


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e300, 1e300, allow_nan=False), min_size=1, max_size=20))
def test_round_trip_is_bit_exact(tmp_path_factory, values):
    path = tmp_path_factory.mktemp("rt") / "c.csv"
    y = np.arange(len(values)) * 0.1 + 1.5
    fieldio.write_amplitude_csv(y, values, path)
    yy, F = fieldio.read_amplitude_csv(path)
    assert np.array_equal(yy, y) and np.array_equal(F, np.array(values))


def test_non_monotone_coordinates_are_rejected(tmp_path):
    with pytest.raises(ValueError):
        fieldio.write_amplitude_csv([1.0, 3.0, 2.0], [0, 0, 0], tmp_path / "x.csv")
    with pytest.raises(ValueError):
        fieldio.write_amplitude_csv([1.0, 2.0], [0.0], tmp_path / "x.csv")
    # decreasing is monotone too
    fieldio.write_amplitude_csv([3.0, 2.0], [0.0, 1.0], tmp_path / "x.csv")


def test_reading_a_wrong_header_fails(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("x,G\n1,2\n", encoding="utf-8")
    with pytest.raises(ValueError):
        fieldio.read_amplitude_csv(p)


def test_fig3_file_names():
    assert fieldio.amplitude_csv_name(1e-3, 5e-4, 0.0) == "pml_0.001_0.0005_n1_0.0_n2_0.0.csv"
    assert fieldio.amplitude_csv_name(1e-3, 5e-4, math.pi / 2) == "pml_0.001_0.0005_n1_1.57_n2_1.57.csv"
    assert fieldio.amplitude_csv_name(1e-3, 5e-4, 0.5) == "pml_0.001_0.0005_n1_0.5_n2_0.5.csv"


def test_field_csv_lists_every_node(tmp_path):
    g = CartesianGrid.square(3)
    f = ComplexField(g, np.arange(9) + 1j)
    lines = fieldio.write_field_csv(f, tmp_path / "f.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "x,y,re,im" and len(lines) == 10
    x, y, re, im = (float(v) for v in lines[1 + 5].split(","))
    assert (x, y, re, im) == (0.5, 1.0, 5.0, 1.0)


def test_gray_scaling():
    assert fieldio.to_gray([0.0, 0.5, 1.0]).tolist() == [0, 128, 255]
    assert fieldio.to_gray([0.0, 2.0], vmax=1.0).tolist() == [0, 255]
    assert not fieldio.to_gray(np.zeros(4)).any()


def test_pgm_round_trip_and_orientation(tmp_path):
    a = np.zeros((4, 3))
    a[3, 2] = 1.0  # largest x, largest y
    p = fieldio.write_modulus_pgm(a, tmp_path / "m.pgm")
    assert p.read_bytes().startswith(b"P5\n4 3\n255\n")
    img = fieldio.read_pgm(p)
    assert img.shape == (3, 4) and img[0, 3] == 255 and img.sum() == 255
    with pytest.raises(ValueError):
        fieldio.write_pgm(np.zeros(3), tmp_path / "bad.pgm")
