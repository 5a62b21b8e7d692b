//! Post-order interval computation and the root condition.

use std::fmt;

use crate::error::Result;
use crate::graph::NodeId;
use crate::interval::{p2_interval, p3_interval, q_interval, root_delta, s_interval, AliasConfig, HalfIntInterval};
use crate::spq::{build_spq_tree, NodeKind, PSubtype, Rooted, SpqTree};
use crate::term::SpTerm;

/// The condition that failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RejectReason {
    P3,
    Pio2,
    Pio3,
    Pin3,
    Root,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectReason::P3 => "P3 condition: shifted child intervals do not meet",
            RejectReason::Pio2 => "Pio2 condition: child difference misses [2, 4-gamma]",
            RejectReason::Pio3 => "Pio3 condition: child difference misses [5/2, 7/2-gamma]",
            RejectReason::Pin3 => "Pin3 condition: child difference range misses 3",
            RejectReason::Root => "root condition: root child interval misses the root range",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub node: NodeId,
    pub reason: RejectReason,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Feasible spiralities of the root child.
    Accepted {
        feasible: HalfIntInterval,
    },
    Rejected(Rejection),
}

/// Everything the tester computed for one instance.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub outcome: Outcome,
    pub rooted: Rooted,
    /// Interval per node in post-order; entries after a rejecting node are
    /// `Empty`.
    pub intervals: Vec<HalfIntInterval>,
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        matches!(self.outcome, Outcome::Accepted { .. })
    }

    pub fn tree(&self) -> &SpqTree {
        &self.rooted.tree
    }
}

fn node_interval(tree: &SpqTree, id: NodeId, intervals: &[HalfIntInterval]) -> (HalfIntInterval, Option<RejectReason>) {
    let n = tree.node(id);
    let child = |i: usize| intervals[n.children[i].idx()];
    match n.kind {
        NodeKind::Q => (q_interval(n.len() as u32), None),
        NodeKind::S => {
            let c: Vec<_> = n.children.iter().map(|c| intervals[c.idx()]).collect();
            (s_interval(&c), None)
        }
        NodeKind::P => match &n.p2 {
            None => (p3_interval(child(0), child(1), child(2)), Some(RejectReason::P3)),
            Some(class) => {
                let reason = match class.subtype {
                    PSubtype::Pio2 { .. } => RejectReason::Pio2,
                    PSubtype::Pio3 { .. } => RejectReason::Pio3,
                    PSubtype::Pin3 { .. } => RejectReason::Pin3,
                };
                (p2_interval(class, child(0), child(1)), Some(reason))
            }
        },
        NodeKind::Root => (HalfIntInterval::Empty, None),
    }
}

/// Intervals of all non-root nodes, stopping at the first empty one.
pub fn compute_intervals(
    tree: &SpqTree,
) -> std::result::Result<Vec<HalfIntInterval>, (Rejection, Vec<HalfIntInterval>)> {
    let mut intervals = vec![HalfIntInterval::Empty; tree.len()];
    for id in tree.postorder() {
        if id == tree.root() {
            break;
        }
        let (iv, reason) = node_interval(tree, id, &intervals);
        if iv.is_empty() {
            let reason = reason.expect("chains and series compositions are always representable");
            return Err((Rejection { node: id, reason }, intervals));
        }
        intervals[id.idx()] = iv;
    }
    Ok(intervals)
}

/// Intervals of all non-root nodes without early exit.
pub fn compute_all_intervals(tree: &SpqTree) -> Vec<HalfIntInterval> {
    let mut intervals = vec![HalfIntInterval::Empty; tree.len()];
    for id in tree.postorder().filter(|&id| id != tree.root()) {
        intervals[id.idx()] = node_interval(tree, id, &intervals).0;
    }
    intervals
}

/// Root alias configuration of the tree.
pub fn root_alias_config(tree: &SpqTree) -> AliasConfig {
    let eta = tree.node(tree.eta());
    AliasConfig::from_flags(eta.alias_coincides(0), eta.alias_coincides(1))
}

/// Final check at the root.
pub fn test_root(eta: HalfIntInterval, delta: HalfIntInterval, is_dummy: bool) -> Option<HalfIntInterval> {
    let feasible = if is_dummy { eta } else { eta.intersect(&delta) };
    (!feasible.is_empty()).then_some(feasible)
}

/// Decides a rooted instance.
pub fn test_rooted(rooted: Rooted) -> Verdict {
    let tree = &rooted.tree;
    let (outcome, intervals) = match compute_intervals(tree) {
        Err((rejection, intervals)) => (Outcome::Rejected(rejection), intervals),
        Ok(intervals) => {
            let delta = root_delta(root_alias_config(tree));
            let outcome = match test_root(intervals[tree.eta().idx()], delta, tree.is_dummy()) {
                Some(feasible) => Outcome::Accepted { feasible },
                None => Outcome::Rejected(Rejection { node: tree.root(), reason: RejectReason::Root }),
            };
            (outcome, intervals)
        }
    };
    Verdict { outcome, rooted, intervals }
}

/// Full pipeline: realize, root, build the tree and decide.
pub fn test(term: &SpTerm) -> Result<Verdict> {
    Ok(test_rooted(build_spq_tree(term)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_spterm;

    fn verdict(s: &str) -> Verdict {
        test(&parse_spterm(s).unwrap()).unwrap()
    }

    #[test]
    fn triangle_rejected_at_root() {
        let v = verdict("P(Q1,S(Q1,Q1))");
        assert_eq!(v.intervals[v.tree().eta().idx()], HalfIntInterval::int(-1, 1));
        assert_eq!(v.outcome, Outcome::Rejected(Rejection { node: v.tree().root(), reason: RejectReason::Root }));
    }

    #[test]
    fn square_accepted() {
        let v = verdict("P(Q2,Q2)");
        assert_eq!(v.outcome, Outcome::Accepted { feasible: HalfIntInterval::int(-1, 1) });
    }

    #[test]
    fn theta_rejected_at_p3() {
        for s in ["P(Q2,Q2,Q2)", "P(S(Q1,Q1),Q2,Q2)"] {
            let v = verdict(s);
            let eta = v.tree().eta();
            assert_eq!(v.outcome, Outcome::Rejected(Rejection { node: eta, reason: RejectReason::P3 }));
        }
    }

    #[test]
    fn triple_edge_rejected_at_pio2() {
        let v = verdict("P(Q1,Q1,Q1)");
        assert_eq!(v.outcome, Outcome::Rejected(Rejection { node: v.tree().eta(), reason: RejectReason::Pio2 }));
    }

    #[test]
    fn root_test_rules() {
        let delta = root_delta(AliasConfig::BothCoincide);
        assert_eq!(test_root(HalfIntInterval::int(-1, 1), delta, false), None);
        assert_eq!(test_root(HalfIntInterval::int(-1, 1), delta, true), Some(HalfIntInterval::int(-1, 1)));
        assert_eq!(test_root(HalfIntInterval::int(1, 3), delta, false), Some(HalfIntInterval::int(2, 3)));
    }

    #[test]
    fn all_intervals_propagate_empty() {
        let t = build_spq_tree(&parse_spterm("S(Q1,P(Q1,Q1,Q1),Q1)").unwrap()).unwrap();
        let all = compute_all_intervals(&t.tree);
        assert!(all[t.tree.eta().idx()].is_empty());
    }
}
