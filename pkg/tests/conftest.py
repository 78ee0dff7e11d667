import numpy as np
import pytest

from elastica.curve import Domain, build_curve
from elastica.manifold import Euclidean, Hyperbolic, Sphere


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def unit_circle(n=256):
    dom = Domain("closed", n)
    th = dom.theta
    pts = np.stack([np.cos(th), np.sin(th)], axis=1)
    return build_curve(Euclidean(2), dom, pts)


def straight_segment(n=128, dy=0.0):
    dom = Domain("open", n)
    th = dom.theta
    pts = np.stack([th, np.full_like(th, dy)], axis=1)
    return build_curve(Euclidean(2), dom, pts)


def colatitude_circle(n=256, colat=0.5, radius=1.0):
    dom = Domain("closed", n)
    th = dom.theta
    s, c = np.sin(colat), np.cos(colat)
    pts = radius * np.stack(
        [s * np.cos(th), s * np.sin(th), c * np.ones_like(th)], axis=1
    )
    return build_curve(Sphere(2, radius), dom, pts)


def all_manifolds():
    return [Euclidean(3), Sphere(2), Sphere(3, radius=2.0), Hyperbolic(2), Hyperbolic(3)]
