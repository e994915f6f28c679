from fractions import Fraction

from hypothesis import strategies as st

from clusterdss.topology import make_topology


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


@st.composite
def topologies(draw, max_n=12):
    n = draw(st.integers(2, max_n))
    L = draw(st.sampled_from(divisors(n)))
    k = draw(st.integers(1, n - 1))
    return make_topology(n, L, k)


alphas = st.one_of(
    st.fractions(min_value=0, max_value=30, max_denominator=12),
    st.just(float("inf")),
)

betas = st.fractions(min_value=0, max_value=4, max_denominator=6)


def grid(ns=(4, 6, 8)):
    for n in ns:
        for L in divisors(n):
            for k in range(1, n):
                yield make_topology(n, L, k)


def alpha_choices(n):
    return [Fraction(1), Fraction(2), Fraction(n - 1), float("inf")]
