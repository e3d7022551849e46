"""
Tests for dyadic intervals, universes and interval collections.
"""
import unittest
from fractions import Fraction

from haarbmo.exceptions import IntervalError, ParameterError
from haarbmo.models.interval import (
    ROOT,
    CoverTracker,
    DyadicInterval,
    DyadicRational,
    IntervalSet,
    Relation,
    Universe,
)


def I(depth, index):
    return DyadicInterval(depth, index)


class TestDyadicRational(unittest.TestCase):
    """Test the DyadicRational class."""

    def test_canonical_form(self):
        value = DyadicRational(2, 3)
        self.assertEqual(value.numerator, 1)
        self.assertEqual(value.exponent, 2)
        self.assertEqual(str(value), "1/4")
        self.assertEqual(DyadicRational(0, 5).exponent, 0)

    def test_arithmetic(self):
        total = DyadicRational(3) + DyadicRational(1, 1)
        self.assertEqual(total, DyadicRational(7, 1))
        self.assertEqual(total.to_fraction(), Fraction(7, 2))
        self.assertEqual(DyadicRational(1, 1) - DyadicRational(1, 2), DyadicRational(1, 2))
        self.assertEqual(DyadicRational(3, 2) * 2, DyadicRational(3, 1))
        self.assertTrue(DyadicRational(1, 3) < DyadicRational(1, 2))

    def test_scaled(self):
        self.assertEqual(DyadicRational(3, 2).scaled(4), 12)
        with self.assertRaises(ParameterError):
            DyadicRational(1, 3).scaled(2)

    def test_from_fraction(self):
        self.assertEqual(DyadicRational.from_fraction(Fraction(5, 8)), DyadicRational(5, 3))
        with self.assertRaises(ParameterError):
            DyadicRational.from_fraction(Fraction(1, 3))


class TestDyadicInterval(unittest.TestCase):
    """Test the DyadicInterval class."""

    def test_endpoints_and_measure(self):
        interval = I(2, 1)
        self.assertEqual(interval.left, DyadicRational(1, 2))
        self.assertEqual(interval.right, DyadicRational(1, 1))
        self.assertEqual(interval.measure, DyadicRational(1, 2))
        self.assertEqual(str(interval), "I(2,1)")

    def test_children_and_parent(self):
        self.assertEqual(ROOT.children(), (I(1, 0), I(1, 1)))
        self.assertEqual(I(2, 3).parent(), I(1, 1))
        left, _ = I(5, 17).children()
        self.assertEqual(left.parent(), I(5, 17))

    def test_no_children_in_universe(self):
        with self.assertRaises(IntervalError) as ctx:
            I(2, 0).children(Universe(2))
        self.assertIn("no children in universe", str(ctx.exception))

    def test_root_has_no_parent(self):
        with self.assertRaises(IntervalError) as ctx:
            ROOT.parent()
        self.assertIn("root has no parent", str(ctx.exception))

    def test_invalid_intervals(self):
        with self.assertRaises(IntervalError):
            I(1, 2)
        with self.assertRaises(IntervalError):
            I(-1, 0)
        # Interval errors are also value errors
        with self.assertRaises(ValueError):
            I(0, 1)

    def test_ancestors(self):
        self.assertEqual(list(I(3, 5).ancestors()), [I(2, 2), I(1, 1), ROOT])
        self.assertEqual(list(ROOT.ancestors()), [])
        self.assertEqual(I(3, 5).ancestor_at(1), I(1, 1))

    def test_relation(self):
        self.assertEqual(I(1, 0).relation(I(2, 1)), Relation.CONTAINS)
        self.assertEqual(I(2, 1).relation(I(1, 0)), Relation.CONTAINED_IN)
        self.assertEqual(I(2, 1).relation(I(2, 2)), Relation.DISJOINT)
        self.assertEqual(I(3, 5).relation(I(3, 5)), Relation.EQUAL)

    def test_contains(self):
        self.assertTrue(I(1, 0).contains(I(3, 3)))
        self.assertFalse(I(1, 1).contains(I(3, 3)))
        self.assertTrue(I(2, 2).contains(I(2, 2)))
        self.assertFalse(I(3, 3).contains(I(1, 0)))

    def test_length_ratio(self):
        self.assertEqual(I(2, 0).length_ratio(I(1, 0)), 2)
        self.assertEqual(I(1, 0).length_ratio(I(3, 0)), Fraction(1, 4))

    def test_canonical_order(self):
        intervals = [I(2, 1), ROOT, I(1, 1), I(2, 0)]
        self.assertEqual(sorted(intervals), [ROOT, I(1, 1), I(2, 0), I(2, 1)])


class TestUniverse(unittest.TestCase):
    """Test the Universe class."""

    def test_size_and_order(self):
        universe = Universe(2)
        self.assertEqual(universe.size, 7)
        self.assertEqual(list(universe.intervals())[:3], [ROOT, I(1, 0), I(1, 1)])
        self.assertTrue(universe.exhaustive)
        self.assertFalse(Universe(5).exhaustive)

    def test_subtree(self):
        self.assertEqual(list(Universe(2).subtree(I(1, 1))), [I(1, 1), I(2, 2), I(2, 3)])

    def test_check(self):
        with self.assertRaises(IntervalError) as ctx:
            Universe(2).check(I(3, 0))
        self.assertIn("interval exceeds max depth", str(ctx.exception))
        self.assertNotIn(I(3, 0), Universe(2))

    def test_depth_limits(self):
        with self.assertRaises(ParameterError):
            Universe(-1)
        with self.assertRaises(ParameterError):
            Universe(63)


class TestIntervalSet(unittest.TestCase):
    """Test the IntervalSet class."""

    def test_duplicates_collapse_in_canonical_order(self):
        collection = IntervalSet([I(2, 1), ROOT, (2, 1), [1, 0]])
        self.assertEqual(collection.members, (ROOT, I(1, 0), I(2, 1)))
        self.assertEqual(len(collection), 3)

    def test_restrict(self):
        self.assertEqual(IntervalSet([ROOT, I(1, 0), I(1, 1)]).restrict(I(1, 0)), IntervalSet([I(1, 0)]))
        collection = IntervalSet([I(2, 0), I(2, 3), I(1, 1)])
        self.assertEqual(collection.restrict(ROOT), collection)
        self.assertEqual(IntervalSet([I(2, 0), I(2, 3)]).restrict(I(1, 1)), IntervalSet([I(2, 3)]))

    def test_maximal_elements(self):
        self.assertEqual(IntervalSet([ROOT, I(1, 0), I(2, 3)]).maximal_elements(), IntervalSet([ROOT]))
        disjoint = IntervalSet([I(2, 0), I(2, 1), I(1, 1)])
        self.assertEqual(disjoint.maximal_elements(), disjoint)
        self.assertEqual(IntervalSet().maximal_elements(), IntervalSet())

    def test_covered_measure(self):
        self.assertEqual(IntervalSet([I(1, 0), I(2, 1)]).covered_measure(), DyadicRational(1, 1))
        self.assertEqual(IntervalSet([I(2, 0), I(2, 2)]).covered_measure(), DyadicRational(1, 1))
        self.assertEqual(IntervalSet().covered_measure(), DyadicRational(0))

    def test_total_measure(self):
        collection = IntervalSet([I(1, 0), I(2, 0), I(2, 3)])
        self.assertEqual(collection.covered_measure(), DyadicRational(3, 2))
        self.assertEqual(collection.total_measure(), DyadicRational(1))

    def test_down_set(self):
        universe = Universe(2)
        self.assertEqual(IntervalSet([ROOT]).down_set(universe), universe.all())
        self.assertEqual(IntervalSet([I(2, 1)]).down_set(universe), IntervalSet([I(2, 1)]))
        self.assertEqual(IntervalSet([I(1, 0), I(1, 1)]).down_set(universe),
                         universe.all() - IntervalSet([ROOT]))

    def test_set_operations(self):
        a = IntervalSet([ROOT, I(1, 0)])
        b = IntervalSet([I(1, 0), I(1, 1)])
        self.assertEqual(a | b, IntervalSet([ROOT, I(1, 0), I(1, 1)]))
        self.assertEqual(a - b, IntervalSet([ROOT]))
        self.assertEqual(a & b, IntervalSet([I(1, 0)]))
        self.assertTrue((a & b).issubset(a))
        self.assertFalse(a.isdisjoint(b))

    def test_pairwise_disjoint(self):
        self.assertTrue(IntervalSet([I(1, 0), I(2, 2)]).is_pairwise_disjoint())
        self.assertFalse(IntervalSet([I(1, 0), I(2, 1)]).is_pairwise_disjoint())


class TestCoverTracker(unittest.TestCase):
    """Test incremental union measures."""

    def test_gain_and_total(self):
        tracker = CoverTracker(3)
        self.assertEqual(tracker.add(I(1, 0)), 4)
        self.assertEqual(tracker.gain(I(2, 0)), 0)
        self.assertEqual(tracker.gain(ROOT), 4)
        self.assertEqual(tracker.add(I(2, 3)), 2)
        self.assertEqual(tracker.total, 6)
        self.assertEqual(tracker.measure, DyadicRational(3, 2))

    def test_agrees_with_covered_measure(self):
        members = [I(3, 1), I(2, 0), I(3, 7), I(1, 1), I(2, 1)]
        tracker = CoverTracker(3)
        for count, interval in enumerate(members, start=1):
            tracker.add(interval)
            self.assertEqual(tracker.measure, IntervalSet(members[:count]).covered_measure())

    def test_too_fine(self):
        with self.assertRaises(IntervalError):
            CoverTracker(2).add(I(3, 0))


if __name__ == "__main__":
    unittest.main()
