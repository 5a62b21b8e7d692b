//! Seeded random terms and exhaustive enumeration of small terms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spq::build_spq_tree;
use crate::term::SpTerm;

const ATTEMPTS: u64 = 64;

/// Shape parameters of the random generator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenParams {
    /// Probability of a chain step.
    pub chain: f64,
    /// Probability of a series step.
    pub series: f64,
    /// Probability of three parallel branches when the pole degrees allow it.
    pub fanout3: f64,
    /// Shortest chain; also the smallest piece a composition is split into.
    pub min_chain: u32,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { chain: 0.4, series: 0.35, fanout3: 0.2, min_chain: 1 }
    }
}

struct Gen {
    rng: ChaCha8Rng,
    params: GenParams,
}

impl Gen {
    fn chain_len(&mut self) -> u32 {
        let mut l = self.params.min_chain;
        while self.rng.gen_bool(0.5) {
            l += 1;
        }
        l
    }

    fn split(&mut self, budget: u32, parts: u32) -> Vec<u32> {
        let mut cuts: Vec<u32> = Vec::with_capacity(parts as usize + 1);
        cuts.push(0);
        while cuts.len() < parts as usize {
            let c = self.rng.gen_range(1..budget);
            if !cuts.contains(&c) {
                cuts.push(c);
            }
        }
        cuts.push(budget);
        cuts.sort_unstable();
        cuts.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Sizes of `parts` pieces of `budget`, each at least the minimum chain length.
    fn split_min(&mut self, budget: u32, parts: u32) -> Vec<u32> {
        let pad = self.params.min_chain - 1;
        self.split(budget - parts * pad, parts).into_iter().map(|s| s + pad).collect()
    }

    /// A term with exactly `budget` edges and pole degrees at most `caps`.
    /// Returns the term with its pole degrees.
    fn build(&mut self, budget: u32, caps: [u32; 2]) -> (SpTerm, [u32; 2]) {
        let m = self.params.min_chain;
        if budget < 2 * m {
            return (SpTerm::Chain(budget), [1, 1]);
        }
        let roll: f64 = self.rng.gen();
        if roll < self.params.chain {
            let l = self.chain_len();
            if budget < l + m {
                return (SpTerm::Chain(budget), [1, 1]);
            }
            let (rest, d) = self.build(budget - l, [3, caps[1]]);
            return (SpTerm::Series(vec![SpTerm::Chain(l), rest]), [1, d[1]]);
        }
        if roll < self.params.chain + self.params.series || caps[0] < 2 || caps[1] < 2 {
            let parts = if budget >= 3 * m && self.rng.gen_bool(0.5) { 3 } else { 2 };
            let sizes = self.split_min(budget, parts);
            let joins: Vec<[u32; 2]> = (1..parts).map(|_| [[2, 2], [1, 3], [3, 1]][self.rng.gen_range(0..3)]).collect();
            let mut children = Vec::with_capacity(parts as usize);
            let mut deg = [0, 0];
            for (i, &size) in sizes.iter().enumerate() {
                let cs = if i == 0 { caps[0] } else { joins[i - 1][1] };
                let ct = if i + 1 == sizes.len() { caps[1] } else { joins[i][0] };
                let (t, d) = self.build(size, [cs, ct]);
                if i == 0 {
                    deg[0] = d[0];
                }
                if i + 1 == sizes.len() {
                    deg[1] = d[1];
                }
                children.push(t);
            }
            return (SpTerm::Series(children), deg);
        }
        let fanout = if budget >= 3 * m && caps[0] >= 3 && caps[1] >= 3 && self.rng.gen_bool(self.params.fanout3) {
            3
        } else {
            2
        };
        let sizes = self.split_min(budget, fanout);
        let mut left = caps;
        let mut children = Vec::with_capacity(fanout as usize);
        for (i, &size) in sizes.iter().enumerate() {
            let reserve = fanout - 1 - i as u32;
            let (t, d) = self.build(size, [left[0] - reserve, left[1] - reserve]);
            left = [left[0] - d[0], left[1] - d[1]];
            children.push(t);
        }
        (SpTerm::Parallel(children), [caps[0] - left[0], caps[1] - left[1]])
    }
}

/// A random canonical term with exactly `edges` edges whose graph has
/// maximum degree 4 and admits a reference edge. Deterministic in
/// `(edges, seed)`.
///
/// # Errors
/// `GenerationFailed` if no valid term is found within the retry budget.
pub fn gen_random_spterm(edges: usize, seed: u64) -> Result<SpTerm> {
    gen_random_spterm_with(edges, seed, GenParams::default())
}

/// [`gen_random_spterm`] with explicit shape parameters.
///
/// # Errors
/// `GenerationFailed` if no valid term is found within the retry budget.
pub fn gen_random_spterm_with(edges: usize, seed: u64, params: GenParams) -> Result<SpTerm> {
    if edges == 0 || params.min_chain == 0 || edges > u32::MAX as usize {
        return Err(Error::GenerationFailed(edges));
    }
    for attempt in 0..ATTEMPTS {
        let seed = seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(seed), params };
        let term = g.build(edges as u32, [3, 3]).0.canonical();
        if build_spq_tree(&term).is_ok() {
            return Ok(term);
        }
    }
    Err(Error::GenerationFailed(edges))
}

fn compositions(n: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(parts as u32 - 1) {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Cartesian product of per-slot alternatives.
fn product(slots: &[&[SpTerm]]) -> Vec<Vec<SpTerm>> {
    slots.iter().fold(vec![Vec::new()], |acc, alts| {
        acc.iter().flat_map(|prefix| alts.iter().map(move |a| [prefix.clone(), vec![a.clone()]].concat())).collect()
    })
}

struct Catalog {
    /// Canonical terms whose top node is not a series composition.
    non_series: Vec<Vec<SpTerm>>,
    /// Canonical terms whose top node is not a parallel composition.
    non_parallel: Vec<Vec<SpTerm>>,
}

impl Catalog {
    fn new(max: u32) -> Self {
        let mut c = Catalog { non_series: vec![Vec::new()], non_parallel: vec![Vec::new()] };
        for n in 1..=max {
            let mut series = Vec::new();
            for parts in 2..=n as usize {
                for sizes in compositions(n, parts) {
                    let slots: Vec<&[SpTerm]> = sizes.iter().map(|&s| &c.non_series[s as usize][..]).collect();
                    series.extend(
                        product(&slots)
                            .into_iter()
                            .filter(|seq| {
                                seq.windows(2).all(|w| !matches!((&w[0], &w[1]), (SpTerm::Chain(_), SpTerm::Chain(_))))
                            })
                            .map(SpTerm::Series),
                    );
                }
            }
            let mut parallel = Vec::new();
            for parts in 2..=3.min(n as usize) {
                for sizes in compositions(n, parts) {
                    let slots: Vec<&[SpTerm]> = sizes.iter().map(|&s| &c.non_parallel[s as usize][..]).collect();
                    parallel.extend(product(&slots).into_iter().map(SpTerm::Parallel));
                }
            }
            let chain = SpTerm::Chain(n);
            c.non_series.push([vec![chain.clone()], parallel].concat());
            c.non_parallel.push([vec![chain], series].concat());
        }
        c
    }
}

/// Every canonical term with at most `max_edges` edges whose graph has
/// maximum degree 4 and admits a reference edge, ordered by edge count.
/// Four parallel branches at the top are written `P(P(a,b,c),d)`.
pub fn all_terms(max_edges: usize) -> Vec<SpTerm> {
    let max = max_edges as u32;
    let cat = Catalog::new(max);
    let mut out = Vec::new();
    for n in 1..=max {
        let mut level: Vec<SpTerm> =
            cat.non_series[n as usize].iter().chain(&cat.non_parallel[n as usize][1..]).cloned().collect();
        let fours = if n >= 4 { compositions(n, 4) } else { Vec::new() };
        for sizes in fours {
            let slots: Vec<&[SpTerm]> = sizes.iter().map(|&s| &cat.non_parallel[s as usize][..]).collect();
            level.extend(product(&slots).into_iter().map(|mut c| {
                let last = c.pop().unwrap();
                SpTerm::Parallel(vec![SpTerm::Parallel(c), last])
            }));
        }
        out.extend(level.into_iter().filter(|t| build_spq_tree(t).is_ok()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        for seed in 0..5 {
            assert_eq!(gen_random_spterm(1, seed).unwrap(), SpTerm::Chain(1));
        }
    }

    #[test]
    fn deterministic_and_exact() {
        let a = gen_random_spterm(10, 42).unwrap();
        assert_eq!(a, gen_random_spterm(10, 42).unwrap());
        for seed in 0..50 {
            let t = gen_random_spterm(40, seed).unwrap();
            assert_eq!(t.edge_count(), 40);
            assert_eq!(t.canonical(), t);
        }
    }

    #[test]
    fn small_catalog() {
        let terms = all_terms(3);
        let names: Vec<String> = terms.iter().map(ToString::to_string).collect();
        assert_eq!(
            names,
            ["Q1", "Q2", "P(Q1,Q1)", "Q3", "P(Q1,Q2)", "P(Q2,Q1)", "P(Q1,Q1,Q1)", "S(Q1,P(Q1,Q1))", "S(P(Q1,Q1),Q1)"]
        );
        for t in all_terms(6) {
            assert_eq!(t.canonical(), t, "{t}");
        }
    }
}
