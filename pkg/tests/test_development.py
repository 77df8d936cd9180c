import random
import xml.etree.ElementTree as ET

import pytest

from routewatch.coefficients import CoefficientVector
from routewatch.development import (
    CLASS_DETERIORATING,
    CLASS_IMPROVING,
    CLASS_MIXED,
    CLASS_STABLE,
    DevelopmentError,
    DevelopmentSeries,
    classify,
    render_image,
    render_svg,
    series_to_csv,
)

# Two published-style evaluation histories used as classification fixtures:
# a voyage that recovers toward a clean route, and one that decays toward
# an incident.  Quality is the unit-weight sum of (S, D, T, C).
RECOVERING = [
    (0.53, 0.45, 0.35, 0.10),
    (0.55, 0.48, 0.45, 0.10),
    (0.65, 0.58, 0.60, 0.25),
    (0.71, 0.68, 0.65, 0.50),
    (1.00, 0.85, 0.78, 0.75),
]
DECAYING = [
    (0.72, 0.80, 0.65, 0.25),
    (0.70, 0.80, 0.58, 0.25),
    (0.50, 0.60, 0.45, 0.25),
    (0.65, 0.55, 0.38, 0.25),
    (0.50, 0.45, 0.25, 0.25),
]


def series_of(rows):
    return DevelopmentSeries(
        tuple((i, CoefficientVector.build(*row)) for i, row in enumerate(rows))
    )


def shoelace_oracle(points):
    acc = 0.0
    n = len(points)
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        acc += x1 * y2 - x2 * y1
    return abs(acc) / 2.0


class TestClassify:
    def test_recovering_series_improves(self):
        s = series_of(RECOVERING)
        assert s.qualities[0] == pytest.approx(1.43)
        assert s.qualities[-1] == pytest.approx(3.38)
        assert classify(s) == CLASS_IMPROVING

    def test_decaying_series_deteriorates(self):
        s = series_of(DECAYING)
        assert s.qualities[0] == pytest.approx(2.42)
        assert s.qualities[-1] == pytest.approx(1.45)
        assert classify(s) == CLASS_DETERIORATING

    def test_constant_series_is_stable(self):
        s = series_of([(0.5, 0.5, 0.5, 0.5)] * 4)
        assert classify(s) == CLASS_STABLE

    def test_reversed_monotone_improving_is_deteriorating(self):
        rows = [(0.2 + 0.1 * i, 0.2 + 0.1 * i, 0.2 + 0.1 * i, 0.2 + 0.1 * i) for i in range(5)]
        assert classify(series_of(rows)) == CLASS_IMPROVING
        assert classify(series_of(list(reversed(rows)))) == CLASS_DETERIORATING

    def test_mixed(self):
        # Net loss but only one declining step out of three.
        rows = [(1.0, 1.0, 1.0, 1.0), (1.1, 1.0, 1.0, 1.0), (1.2, 1.0, 1.0, 1.0), (0.1, 0.5, 0.5, 0.5)]
        assert classify(series_of(rows)) == CLASS_MIXED

    def test_single_entry_is_an_error(self):
        s = series_of([(0.5, 0.5, 0.5, 0.5)])
        with pytest.raises(DevelopmentError):
            classify(s)

    def test_epsilon_tolerates_noise(self):
        rows = [(0.50, 0.5, 0.5, 0.5), (0.495, 0.5, 0.5, 0.5), (0.60, 0.5, 0.5, 0.5), (0.70, 0.5, 0.5, 0.5)]
        assert classify(series_of(rows), epsilon=0.02) == CLASS_IMPROVING

    def test_entries_must_be_ordered(self):
        v = CoefficientVector.build(0.5, 0.5, 0.5, 0.5)
        with pytest.raises(DevelopmentError):
            DevelopmentSeries(((3, v), (1, v)))


class TestRenderImage:
    def test_unit_vector_area(self):
        image = render_image(CoefficientVector.build(1.0, 1.0, 1.0, 1.0))
        assert image.area == pytest.approx(2.0)
        assert image.area == pytest.approx(shoelace_oracle(image.control_points))
        assert not image.t_clamped
        assert set(image.spokes) == {"S", "D", "T", "C"}

    def test_quadratic_scaling(self):
        for c in (0.25, 0.5, 0.75):
            image = render_image(CoefficientVector.build(c, c, c, c))
            assert image.area == pytest.approx(2.0 * c * c)

    def test_t_clamped_for_display(self):
        image = render_image(CoefficientVector.build(1.0, 1.0, 1.3, 1.0))
        assert image.t_clamped
        assert image.spokes["T"] == 1.0
        assert image.area == pytest.approx(2.0)

    def test_zero_safety_degenerate_spoke(self):
        image = render_image(CoefficientVector.build(0.0, 0.5, 0.5, 0.5))
        assert image.spokes["S"] == 0.0
        assert image.area == pytest.approx(shoelace_oracle(image.control_points))
        assert image.area > 0

    def test_area_monotone_under_dominance(self):
        rng = random.Random(99)
        for _ in range(1000):
            lo = [rng.uniform(0.01, 1.0) for _ in range(4)]
            hi = [min(1.0, x + rng.uniform(0, 0.5)) for x in lo]
            a_lo = render_image(CoefficientVector.build(*lo)).area
            a_hi = render_image(CoefficientVector.build(*hi)).area
            assert a_hi >= a_lo - 1e-12


class TestRenderSvg:
    def test_single_image_structure(self):
        svg = render_svg([render_image(CoefficientVector.build(0.8, 0.7, 0.6, 0.5))], ["route"])
        root = ET.fromstring(svg)
        assert root.attrib["version"] == "1.1"
        ns = "{http://www.w3.org/2000/svg}"
        groups = root.findall(f"{ns}g")
        assert len(groups) == 1
        assert len(groups[0].findall(f"{ns}line")) == 4  # spokes
        assert len(groups[0].findall(f"{ns}path")) == 1  # closed curve
        # center mark + unit ring
        assert len(root.findall(f"{ns}circle")) == 2

    def test_byte_deterministic(self):
        images = [
            render_image(CoefficientVector.build(1.0, 0.9886, 0.7879, 0.5)),
            render_image(CoefficientVector.build(0.5, 0.8667, 0.6908, 2.0 / 11.0)),
        ]
        a = render_svg(images, ["reference", "sailed"])
        b = render_svg(images, ["reference", "sailed"])
        assert a.encode() == b.encode()

    def test_two_overlaid_images(self):
        bigger = render_image(CoefficientVector.build(1.0, 0.9886, 0.7879, 0.5))
        smaller = render_image(CoefficientVector.build(0.5, 0.8667, 0.6908, 2.0 / 11.0))
        svg = render_svg([bigger, smaller], ["reference", "sailed"])
        root = ET.fromstring(svg)
        ns = "{http://www.w3.org/2000/svg}"
        groups = root.findall(f"{ns}g")
        assert [g.attrib["data-label"] for g in groups] == ["reference", "sailed"]
        # Distinguished by stroke style: second group is dashed.
        assert "stroke-dasharray" not in (groups[0].find(f"{ns}path").attrib)
        assert "stroke-dasharray" in (groups[1].find(f"{ns}path").attrib)
        assert bigger.area > smaller.area

    def test_clamp_annotation_present(self):
        svg = render_svg([render_image(CoefficientVector.build(1.0, 1.0, 1.2, 1.0))], ["fast"])
        assert "clamped" in svg

    def test_empty_list_is_error(self):
        with pytest.raises(DevelopmentError):
            render_svg([], [])

    def test_label_count_mismatch(self):
        with pytest.raises(DevelopmentError):
            render_svg([render_image(CoefficientVector.build(1, 1, 1, 1))], [])


class TestCsvExport:
    def test_golden(self):
        s = series_of([(0.5, 0.6, 0.7, 0.8)])
        text = series_to_csv(s)
        lines = text.strip().split("\n")
        assert lines[0] == "waypoint,S,D,T,C,quality"
        assert lines[1] == "0,0.500000,0.600000,0.700000,0.800000,2.600000"
