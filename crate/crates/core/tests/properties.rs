use proptest::prelude::*;
use rlp_core::graph::to_plane_graph;
use rlp_core::interval::{p2_interval, p3_interval, s_interval, HalfIntInterval};
use rlp_core::spq::NodeKind;
use rlp_core::tester::compute_all_intervals;
use rlp_core::{
    build_spq_tree, gen_random_spterm, graph_from_json, graph_to_json, parse_spterm, term_from_json, term_to_json,
    Error,
};

fn widen(iv: HalfIntInterval, by: (i64, i64)) -> HalfIntInterval {
    match iv {
        HalfIntInterval::Empty => iv,
        HalfIntInterval::Range { lo2, hi2 } => HalfIntInterval::new(lo2 - 2 * by.0, hi2 + 2 * by.1),
    }
}

fn subset(a: HalfIntInterval, b: HalfIntInterval) -> bool {
    a.values().all(|x| b.contains(x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn widening_children_never_shrinks_parent(edges in 2usize..40, seed in any::<u64>(), w in prop::collection::vec((0i64..3, 0i64..3), 3)) {
        let rooted = build_spq_tree(&gen_random_spterm(edges, seed).unwrap()).unwrap();
        let tree = &rooted.tree;
        let iv = compute_all_intervals(tree);
        for id in tree.postorder().filter(|&id| id != tree.root()) {
            let n = tree.node(id);
            let kids: Vec<HalfIntInterval> = n.children.iter().map(|c| iv[c.idx()]).collect();
            let wide: Vec<HalfIntInterval> = kids.iter().enumerate().map(|(i, &k)| widen(k, w[i % 3])).collect();
            let (before, after) = match (n.kind, &n.p2) {
                (NodeKind::S, _) => (s_interval(&kids), s_interval(&wide)),
                (NodeKind::P, None) => (p3_interval(kids[0], kids[1], kids[2]), p3_interval(wide[0], wide[1], wide[2])),
                (NodeKind::P, Some(class)) => (p2_interval(class, kids[0], kids[1]), p2_interval(class, wide[0], wide[1])),
                _ => continue,
            };
            prop_assert!(subset(before, after), "{} {}: {} not within {}", id, n.label(), before, after);
        }
    }

    #[test]
    fn text_round_trip(edges in 1usize..60, seed in any::<u64>()) {
        let t = gen_random_spterm(edges, seed).unwrap();
        prop_assert_eq!(parse_spterm(&t.to_string()).unwrap(), t.clone());
        prop_assert_eq!(t.canonical(), t);
    }

    #[test]
    fn json_round_trip(edges in 1usize..60, seed in any::<u64>()) {
        let t = gen_random_spterm(edges, seed).unwrap();
        let json = term_to_json(&t).unwrap();
        prop_assert_eq!(term_from_json(&json).unwrap().term, t.clone());
        let g = to_plane_graph(&t).unwrap();
        let (back, _) = graph_from_json(&graph_to_json(&g)).unwrap();
        prop_assert_eq!(back.rotations(), g.rotations());
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn every_two_child_parallel_node_has_a_subtype(edges in 2usize..60, seed in any::<u64>()) {
        let t = gen_random_spterm(edges, seed).unwrap();
        let rooted = build_spq_tree(&t);
        let unclassified = matches!(rooted, Err(Error::UnclassifiablePNode { .. }));
        prop_assert!(!unclassified);
        let tree = rooted.unwrap().tree;
        for n in tree.nodes() {
            if n.kind == NodeKind::P {
                prop_assert_eq!(n.p2.is_some(), n.children.len() == 2);
            }
            for w in 0..2 {
                prop_assert!(n.indeg[w] + n.outdeg[w] <= 4);
            }
        }
    }
}

#[test]
fn degree_totals_match_the_graph() {
    for t in rlp_core::all_terms(7) {
        let rooted = build_spq_tree(&t).unwrap();
        for n in rooted.tree.nodes() {
            for w in 0..2 {
                let deg = rooted.working.degree(n.poles[w]);
                assert_eq!(usize::from(n.indeg[w] + n.outdeg[w]), deg, "{t} node {}", n.label());
            }
        }
    }
}
