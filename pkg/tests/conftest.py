import numpy as np
import pytest
from hypothesis import settings

from coneslice.embedding import sample_chart_point
from coneslice.flrw import build_flrw

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

SCALE_FACTORS = ["zero", "const:0.3", "power:2"]


@pytest.fixture(params=[(sf, n) for sf in SCALE_FACTORS for n in (2, 4)], ids=lambda p: f"{p[0]}-n{p[1]}")
def space(request):
    sf, n = request.param
    return build_flrw(sf, n, 1.0)


def random_cone_point(rng, n, scale=1.0):
    """A point of the null cone with y^{n+1} > 0, built from random directions."""
    space_part = rng.standard_normal(n)
    time_angle = rng.uniform(0.2, np.pi - 0.2)
    r = np.linalg.norm(space_part)
    y = np.empty(n + 2)
    y[1 : n + 1] = space_part
    y[0] = r * np.cos(time_angle)
    y[n + 1] = r * np.sin(time_angle)
    return scale * y


def draw(space, rng):
    """(x, source point, tangent rows) on the dS chart inside the deformation domain."""
    chart = space.chart
    x = sample_chart_point(chart, rng, lambda x: space.l.contains(chart.point_map(x)))
    return x, chart.point(x), chart.tangents(x)
