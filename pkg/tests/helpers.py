"""Small constructors shared by the test modules."""

from hypothesis import strategies as st

from zerocycles.colored_partitions import ColoredSet, NEqualsPartition


def P1(d, n, *blocks):
    """Partition of the one-colored set [d] from blocks written like "123"."""
    D = ColoredSet((d,))
    return NEqualsPartition.from_labels(D, n, [[(1, int(ch)) for ch in b] for b in blocks])


def carriers(max_size=5, max_colors=3):
    """Colored sets with |D| <= max_size."""
    return (
        st.lists(st.integers(1, max_size), min_size=1, max_size=max_colors)
        .filter(lambda s: sum(s) <= max_size)
        .map(lambda s: ColoredSet(tuple(s)))
    )
