from fractions import Fraction

from curvature_locus.net_model import NetOfQuadrics, SingularJet
from curvature_locus.plotting import plot_abc_regions, plot_census, plot_locus


def _png(path):
    return path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_plot_locus(tmp_path):
    out = plot_locus(NetOfQuadrics.parse("x*y", "x*z", "y*z"), tmp_path / "a.png", samples=12, points=[(0, 0, 0)], title="t")
    assert _png(out)


def test_plot_cylinder(tmp_path):
    jet = SingularJet.from_net(NetOfQuadrics.parse("x^2/2-y^2/2", "x*z", "y*z"))
    assert _png(plot_locus(jet, tmp_path / "b.png", case="cylinder", samples=12))


def test_plot_regions(tmp_path):
    recs = [(Fraction(-2), Fraction(1), 6, 6), (Fraction(-2), Fraction(0), 2, 2), (Fraction(1), Fraction(1), 2, 6)]
    assert _png(plot_abc_regions(recs, tmp_path / "c.png"))


def test_plot_census(tmp_path):
    rows = [{"census": ["RomanSteiner", "CrossCapSurface"]}, {"census": ["Type6"]}]
    assert _png(plot_census(rows, tmp_path / "d.png"))
