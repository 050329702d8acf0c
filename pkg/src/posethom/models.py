"""Small named posets, maps and functors used as worked examples."""

from .abelian import FpAbGroup
from .functor import CoeffFunctor
from .poset import MonotoneMap, Poset


def poset_v() -> Poset:
    """``a < b``, ``a < c``."""
    return Poset("abc", [("a", "b"), ("a", "c")])


def functor_v(V: Poset = None) -> CoeffFunctor:
    """``Z -> 0`` towards ``b`` and ``Z --x2--> Z`` towards ``c``."""
    V = V or poset_v()
    Z, O = FpAbGroup.free(1), FpAbGroup.trivial()
    return CoeffFunctor(V, {"a": Z, "b": O, "c": Z},
                        {("a", "b"): [[]], ("a", "c"): [[2]]})


def circle4(names=("a", "b", "c", "d")) -> Poset:
    """Four-point circle: two minimal points below two maximal ones."""
    a, b, c, d = names
    return Poset(names, [(a, c), (a, d), (b, c), (b, d)])


def _from_uppers(tops, lows):
    mids = sorted({m for ms in list(tops.values()) + list(lows.values()) for m in ms},
                  key=lambda s: int(s[1:]))
    elements = list(tops) + mids + list(lows)
    covers = [(m, t) for t, ms in tops.items() for m in ms]
    covers += [(c, m) for c, ms in lows.items() for m in ms]
    return Poset(elements, covers)


def projective_plane() -> Poset:
    """13-point model of the real projective plane."""
    b = lambda *ix: [f"b{i}" for i in ix]  # noqa: E731
    return _from_uppers(
        {"a1": b(1, 2, 3, 4), "a2": b(1, 2, 5, 6), "a3": b(3, 4, 5, 6)},
        {"c1": b(1, 3, 6), "c2": b(1, 4, 5), "c3": b(2, 3, 5), "c4": b(2, 4, 6)})


def projective_plane_map(P: Poset = None) -> MonotoneMap:
    """Map onto ``V`` collapsing the circle below ``a1`` to ``a``."""
    P = P or projective_plane()
    fiber = {"a": ["b1", "b2", "b3", "b4", "c1", "c2", "c3", "c4"],
             "b": ["a1"], "c": ["a2", "a3", "b5", "b6"]}
    return MonotoneMap(P, poset_v(), {x: y for y, xs in fiber.items() for x in xs})


def klein_bottle() -> Poset:
    """16-point model of the Klein bottle."""
    b = lambda *ix: [f"b{i}" for i in ix]  # noqa: E731
    return _from_uppers(
        {"a1": b(1, 2, 3, 4), "a2": b(1, 2, 5, 6), "a3": b(3, 5, 7, 8),
         "a4": b(4, 6, 7, 8)},
        {"c1": b(1, 4, 5, 7), "c2": b(2, 4, 5, 8), "c3": b(1, 3, 6, 7),
         "c4": b(2, 3, 6, 8)})


def klein_base() -> Poset:
    return circle4(("alpha", "beta", "gamma", "delta"))


def klein_map(X: Poset = None) -> MonotoneMap:
    """Bundle projection onto the four-point circle with circle fibers."""
    X = X or klein_bottle()
    fiber = {"alpha": ["b4", "b5", "c1", "c2"], "beta": ["b3", "b6", "c3", "c4"],
             "gamma": ["a1", "a2", "b1", "b2"], "delta": ["a3", "a4", "b7", "b8"]}
    return MonotoneMap(X, klein_base(), {x: y for y, xs in fiber.items() for x in xs})


def circle_double_cover():
    """Eight-point circle, four-point circle and a degree-two map between them."""
    big = Poset([f"m{i}" for i in range(4)] + [f"M{i}" for i in range(4)],
                [(f"m{i}", f"M{i}") for i in range(4)]
                + [(f"m{(i + 1) % 4}", f"M{i}") for i in range(4)])
    small = circle4(("m0", "m1", "M0", "M1"))
    wrap = {f"m{i}": f"m{i % 2}" for i in range(4)}
    wrap.update({f"M{i}": f"M{i % 2}" for i in range(4)})
    return big, small, MonotoneMap(big, small, wrap)


def projective_plane_diagram():
    """``(V, D, arrows)`` whose homotopy colimit is the projective plane model."""
    P = projective_plane()
    f = projective_plane_map(P)
    D = {y: P.subposet(f.preimage([y])) for y in "abc"}
    arrows = {("a", "b"): {x: "a1" for x in D["a"].elements},
              ("a", "c"): {"b1": "a2", "b2": "a2", "b3": "a3", "b4": "a3",
                           "c1": "b6", "c2": "b5", "c3": "b5", "c4": "b6"}}
    return poset_v(), D, arrows
