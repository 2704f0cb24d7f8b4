"""
Unit tests for the certified isometric embedding into Q³ and its balancing.

Version: 0.1.0
Last Updated: 2026-10-17
Status: Active

================================================================================
FUNCTIONS UNDER TEST:
================================================================================
- build_F1 / build_F2 / build_F3 / ramp_parameters / vertex_levels
- segment_intersection: exact closed-segment intersection in Q³
- embed / certify: isometry per segment, global injectivity, sources on input edges
- balance / is_balanced: completion by rays; Embedding3D.image_set canonical form
- plot_rows

================================================================================
TEST DATA SOURCES:
================================================================================
- Segment of length 2 worked by hand (images, rays)
- Circle, theta, K4 and banana graphs from tropical_jacobians.examples
- 100 random connected multigraphs from tests.utilities (seeded)
================================================================================
"""

import unittest
from dataclasses import replace
from fractions import Fraction
from unittest import mock

from tropical_jacobians.core_graph import Edge, EdgePoint, MetricGraph, Vertex, simple_loopless_model, subdivide
from tropical_jacobians.divisors_functions import Divisor, divisor_of, is_integer_sloped
from tropical_jacobians.embedding import (
    EmbeddingOptions,
    Ray,
    Segment3D,
    SubEdge,
    balance,
    build_F1,
    build_F2,
    build_F3,
    certify,
    embed,
    is_balanced,
    plot_rows,
    ramp_parameters,
    segment_intersection,
    vertex_levels,
)
from tropical_jacobians.errors import CertificationFailure, ModelNotSimpleError
from tropical_jacobians.examples import banana, circle, complete_graph, path_graph, segment, theta

from tests.utilities import EMBEDDING_CORPUS, generate_random_graphs, interior_offsets

# =============================================================================
# Test Parameters
# =============================================================================

NUM_RANDOM_EMBEDDINGS: int = 100


def P(x, y, z):
    return (Fraction(x), Fraction(y), Fraction(z))


class TestCoordinateFunctions(unittest.TestCase):
    """F1, F2, F3 on simple loopless models."""

    def test_f1_tent_and_divisor(self):
        f1 = build_F1(segment(2))
        self.assertEqual(f1.breakpoints("e1"), ((0, 0), (1, 1), (2, 0)))
        expected = Divisor.at(Vertex("v1")) + Divisor.at(Vertex("v2")) - 2 * Divisor.at(EdgePoint("e1", 1))
        self.assertEqual(divisor_of(f1), expected)

    def test_f2_peaks_follow_edge_order(self):
        f2 = build_F2(path_graph(3))
        self.assertEqual(f2.evaluate("e1", Fraction(1, 2)), Fraction(1, 2))
        self.assertEqual(f2.evaluate("e2", Fraction(1, 2)), 1)
        self.assertTrue(is_integer_sloped(f2))
        self.assertTrue(all(y == 0 for _, y in f2.vertex_values))

    def test_ramp_parameters(self):
        cases = [
            ((2, 1, 2), (1, Fraction(1, 2))),
            ((2, 2, 1), (-1, Fraction(1, 2))),
            ((1, 1, 4), (6, Fraction(1, 4))),
            ((Fraction(1, 3), 1, 2), (6, Fraction(1, 12))),
        ]
        for args, expected in cases:
            with self.subTest(args=args):
                self.assertEqual(ramp_parameters(*map(Fraction, args)), expected)
                _, half = expected
                self.assertLessEqual(half, Fraction(args[0]) / 4)

    def test_f3_worked_edge(self):
        f3 = build_F3(segment(2))
        self.assertEqual(f3.breakpoints("e1"), ((0, 1), (Fraction(1, 2), 1), (Fraction(3, 2), 2), (2, 2)))

    def test_f3_separates_edge_halves(self):
        for graph in (simple_loopless_model(theta(1, 2, 3)), complete_graph(4), simple_loopless_model(circle(3))):
            f3 = build_F3(graph)
            values = [y for _, y in f3.vertex_values]
            self.assertEqual(len(set(values)), len(values))
            for edge in graph.edges:
                for t in interior_offsets(edge, 7):
                    if t == edge.length / 2:
                        continue
                    with self.subTest(edge=edge.id, t=t):
                        self.assertNotEqual(f3.evaluate(edge.id, t), f3.evaluate(edge.id, edge.length - t))

    def test_requires_simple_model(self):
        for build in (build_F1, build_F2, build_F3):
            with self.subTest(build=build.__name__):
                with self.assertRaises(ModelNotSimpleError):
                    build(theta())
                with self.assertRaises(ModelNotSimpleError):
                    build(circle())

    def test_perturbed_levels(self):
        levels = vertex_levels(segment(2), perturbed=True)
        self.assertEqual(levels, {"v1": Fraction(3, 2), "v2": Fraction(7, 3)})


class TestSegmentIntersection(unittest.TestCase):
    """Exact intersection of closed segments."""

    def test_cases(self):
        cases = [
            ((P(0, 0, 0), P(2, 2, 0), P(0, 2, 0), P(2, 0, 0)), P(1, 1, 0)),
            ((P(0, 0, 0), P(2, 2, 0), P(0, 2, 1), P(2, 0, 1)), None),
            ((P(0, 0, 0), P(1, 0, 0), P(1, 0, 0), P(1, 1, 0)), P(1, 0, 0)),
            ((P(0, 0, 0), P(1, 0, 0), P(0, 1, 0), P(1, 1, 0)), None),
            ((P(0, 0, 0), P(2, 0, 0), P(1, 0, 0), P(3, 0, 0)), (P(1, 0, 0), P(2, 0, 0))),
            ((P(0, 0, 0), P(1, 0, 0), P(1, 0, 0), P(2, 0, 0)), P(1, 0, 0)),
            ((P(0, 0, 0), P(1, 0, 0), P(2, 0, 0), P(3, 0, 0)), None),
            ((P(0, 0, 0), P(2, 2, 2), P(2, 0, 0), P(3, -1, 0)), None),
        ]
        for args, expected in cases:
            with self.subTest(args=args):
                self.assertEqual(segment_intersection(*args), expected)


class TestEmbed(unittest.TestCase):
    """Construction and certification."""

    def test_segment_by_hand(self):
        emb = embed(segment(2))
        self.assertEqual(
            [(s.start, s.end) for s in emb.segments],
            [
                (P(0, 0, 1), P(Fraction(1, 2), Fraction(1, 2), 1)),
                (P(Fraction(1, 2), Fraction(1, 2), 1), P(1, 1, Fraction(3, 2))),
                (P(1, 1, Fraction(3, 2)), P(Fraction(1, 2), Fraction(1, 2), 2)),
                (P(Fraction(1, 2), Fraction(1, 2), 2), P(0, 0, 2)),
            ],
        )
        self.assertEqual([s.direction for s in emb.segments], [(1, 1, 0), (1, 1, 1), (-1, -1, 1), (-1, -1, 0)])
        self.assertTrue(all(s.lattice_length == Fraction(1, 2) for s in emb.segments))
        self.assertEqual(emb.segments[0].to_json()["src"], {"edge": "e1", "from": "0", "to": "1/2"})

    def test_named_graphs_certify(self):
        cases = [(segment(2), 2), (circle(3), 3), (theta(1, 2, 3), 6), (complete_graph(4), 6), (banana(4), 4)]
        for graph, total in cases:
            with self.subTest(total=total):
                report = certify(embed(graph))
                self.assertEqual(report.total_lattice_length, total)
                self.assertEqual(report.pairs_tested, report.segments * (report.segments - 1) // 2)

    def test_single_vertex(self):
        emb = embed(MetricGraph(("v1",), ()))
        self.assertEqual(emb.segments, ())
        self.assertEqual(balance(emb).rays, ())

    def test_subdivision_does_not_change_image(self):
        cases = [
            (theta(1, 2, 3), [EdgePoint("e1", Fraction(1, 3))]),
            (complete_graph(4), [EdgePoint("e1", Fraction(1, 2)), EdgePoint("e6", Fraction(1, 3))]),
            (path_graph(3), [EdgePoint("e2", Fraction(1, 2))]),
            (banana(3), [EdgePoint("e2", Fraction(1, 4)), EdgePoint("e2", Fraction(1, 2))]),
        ]
        for graph, points in cases:
            refined, _ = subdivide(graph, points)
            with self.subTest(edges=graph.edge_ids):
                self.assertEqual(embed(refined).image_set(), embed(graph).image_set())

    def test_sources_are_pieces_of_input_edges(self):
        emb = embed(path_graph(3))
        self.assertEqual([s.to_json()["src"] for s in emb.segments], [
            {"edge": "e1", "from": "0", "to": "1/2"},
            {"edge": "e1", "from": "1/2", "to": "1"},
            {"edge": "e2", "from": "0", "to": "1/2"},
            {"edge": "e2", "from": "1/2", "to": "1"},
        ])
        self.assertEqual(emb.graph, path_graph(3))

    def test_sources_against_edge_orientation(self):
        graph = MetricGraph(("v1", "v2", "v3"), (Edge("e1", "v1", "v2", 1), Edge("e2", "v3", "v2", 1)))
        emb = embed(graph)
        self.assertEqual([s.source for s in emb.segments[2:]], [
            SubEdge("e2", Fraction(1), Fraction(1, 2)),
            SubEdge("e2", Fraction(1, 2), Fraction(0)),
        ])
        self.assertTrue(all(s.source.length == s.lattice_length == Fraction(1, 2) for s in emb.segments))

    def test_threads_give_same_report(self):

        emb = embed(complete_graph(4))
        self.assertEqual(certify(emb, max_workers=4), certify(emb))
        self.assertEqual(embed(theta(1, 2, 3), EmbeddingOptions(max_workers=3)), embed(theta(1, 2, 3)))

    def test_certify_rejects_crossing_segment(self):
        emb = embed(segment(2))
        stray = Segment3D(P(0, 0, 1), P(Fraction(1, 2), Fraction(1, 2), 2), SubEdge("x1", Fraction(0), Fraction(1, 2)),
                          (1, 1, 2), ("x", "y"))
        with self.assertRaises(CertificationFailure):
            certify(replace(emb, segments=emb.segments + (stray,)))

    def test_certify_rejects_non_primitive_direction(self):
        emb = embed(segment(2))
        first = emb.segments[0]
        doubled = replace(first, direction=(2, 2, 0))
        with self.assertRaises(CertificationFailure):
            certify(replace(emb, segments=(doubled,) + emb.segments[1:]))

    def test_fallback_perturbs_vertex_levels(self):
        with mock.patch("tropical_jacobians.embedding.certify", side_effect=[CertificationFailure("forced"), None]):
            with self.assertWarns(UserWarning):
                emb = embed(segment(2), EmbeddingOptions(perturb_on_failure=True))
        f3 = emb.functions[2]
        self.assertEqual(f3.vertex_value("v1"), Fraction(3, 2))

    def test_failure_propagates_without_fallback(self):
        with mock.patch("tropical_jacobians.embedding.certify", side_effect=CertificationFailure("forced")):
            with self.assertRaises(CertificationFailure):
                embed(segment(2))

    def test_random_graphs(self):
        for case in generate_random_graphs(NUM_RANDOM_EMBEDDINGS, **EMBEDDING_CORPUS):
            graph = case.graph
            emb = embed(graph)
            covered = {edge_id: Fraction(0) for edge_id in graph.edge_ids}
            with self.subTest(case=case.case_id):
                self.assertEqual(certify(emb).total_lattice_length, graph.total_length)
                for s in emb.segments:
                    self.assertEqual(s.lattice_length, s.source.length)
                    length = graph.edge(s.source.edge).length
                    self.assertTrue(0 <= min(s.source.start, s.source.end) < max(s.source.start, s.source.end) <= length)
                    covered[s.source.edge] += s.source.length
                self.assertEqual(covered, {e.id: e.length for e in graph.edges})
                self.assertTrue(is_balanced(balance(emb)))

    def test_plot_rows(self):
        emb = embed(segment(2))
        rows = plot_rows(emb)
        self.assertEqual(rows.shape, (8, 4))
        self.assertEqual(list(rows[2]), [1.0, 0.5, 0.5, 1.0])


class TestBalance(unittest.TestCase):
    """Completion by rays."""

    def test_segment_rays(self):
        complex_ = balance(embed(segment(2)))
        rays = {ray.vertex: ray for ray in complex_.rays}
        self.assertEqual(rays[P(0, 0, 1)], Ray(P(0, 0, 1), (-1, -1, 0), 1))
        self.assertEqual(rays[P(1, 1, Fraction(3, 2))], Ray(P(1, 1, Fraction(3, 2)), (1, 1, 0), 2))
        self.assertTrue(is_balanced(complex_))

    def test_removing_a_ray_unbalances(self):
        complex_ = balance(embed(theta(1, 2, 3)))
        self.assertTrue(is_balanced(complex_))
        self.assertFalse(is_balanced(replace(complex_, rays=complex_.rays[1:])))

    def test_json_shape(self):
        doc = balance(embed(segment(2))).to_json()
        self.assertEqual(sorted(doc), ["rays", "segments", "subdivision"])
        self.assertIn({"at": ["0", "0", "1"], "dir": [-1, -1, 0], "mult": 1}, doc["rays"])


if __name__ == '__main__':
    unittest.main()
