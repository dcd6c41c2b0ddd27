//! Dependency graphs and exact fractional covers for the standard settings:
//! iid samples, bipartite ranking (AUC), U-statistic ranking over all
//! ordered pairs, and independent blocks of a mixing sequence.

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::depgraph::{CoverElement, CoverError, DependencyGraph, FractionalCover, GraphError};
use crate::Rational;

/// Largest sample size for which [`ustat_ranking_cover`] enumerates `ℓ!` sets.
pub const USTAT_COVER_MAX_L: usize = 7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoversError {
    #[error("class counts must be positive (got {pos} positives, {neg} negatives)")]
    EmptyClass { pos: usize, neg: usize },
    #[error("{pos} x {neg} pairs overflows the index type")]
    Overflow { pos: usize, neg: usize },
    #[error("sample size {0} is too small (need at least {1})")]
    SampleTooSmall(usize, usize),
    #[error("sample size {l} exceeds the enumeration cap {cap}")]
    TooLarge { l: usize, cap: usize },
    #[error("{m} samples cannot be split into pairs of blocks of length {a}")]
    IndivisibleBlocks { m: usize, a: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// Class counts of a bipartite ranking sample. Pair `(i, j)` of positive `i`
/// and negative `j` is vertex `i * neg_count + j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BipartiteRankingShape {
    pos_count: usize,
    neg_count: usize,
}

impl BipartiteRankingShape {
    pub fn new(pos_count: usize, neg_count: usize) -> Result<Self, CoversError> {
        if pos_count == 0 || neg_count == 0 {
            return Err(CoversError::EmptyClass {
                pos: pos_count,
                neg: neg_count,
            });
        }
        pos_count.checked_mul(neg_count).ok_or(CoversError::Overflow {
            pos: pos_count,
            neg: neg_count,
        })?;
        Ok(Self { pos_count, neg_count })
    }

    pub fn pos_count(&self) -> usize {
        self.pos_count
    }

    pub fn neg_count(&self) -> usize {
        self.neg_count
    }

    /// Number of pairs `ℓ⁺ℓ⁻`.
    pub fn pair_count(&self) -> usize {
        self.pos_count * self.neg_count
    }

    pub fn l_max(&self) -> usize {
        self.pos_count.max(self.neg_count)
    }

    pub fn l_min(&self) -> usize {
        self.pos_count.min(self.neg_count)
    }

    pub fn pair_index(&self, pos: usize, neg: usize) -> usize {
        pos * self.neg_count + neg
    }

    pub fn pair(&self, index: usize) -> (usize, usize) {
        (index / self.neg_count, index % self.neg_count)
    }
}

/// Edgeless graph on `m` vertices with the one-set cover.
pub fn iid_cover(m: usize) -> Result<(DependencyGraph, FractionalCover), CoversError> {
    let graph = DependencyGraph::edgeless(m)?;
    let cover = FractionalCover::unit(m, vec![(0..m).collect()])?;
    Ok((graph, cover))
}

/// Pairs sharing a positive or a negative example are adjacent.
pub fn bipartite_ranking_graph(shape: BipartiteRankingShape) -> Result<DependencyGraph, CoversError> {
    let (lp, ln) = (shape.pos_count, shape.neg_count);
    let mut edges = Vec::with_capacity(shape.pair_count() * (lp + ln - 2) / 2);
    for i in 0..lp {
        for j in 0..ln {
            let v = shape.pair_index(i, j);
            edges.extend((j + 1..ln).map(|q| (v, shape.pair_index(i, q))));
            edges.extend((i + 1..lp).map(|p| (v, shape.pair_index(p, j))));
        }
    }
    Ok(DependencyGraph::new(shape.pair_count(), edges)?)
}

/// `ℓ_max` perfect matchings obtained by cycling the larger class against the
/// smaller one; unit weights, so `ω = ℓ_max`.
pub fn bipartite_ranking_cover(shape: BipartiteRankingShape) -> Result<FractionalCover, CoversError> {
    let (lp, ln) = (shape.pos_count, shape.neg_count);
    let sets = if lp >= ln {
        (0..lp)
            .map(|k| (0..ln).map(|j| shape.pair_index((j + k) % lp, j)).collect())
            .collect()
    } else {
        (0..ln)
            .map(|k| (0..lp).map(|i| shape.pair_index(i, (i + k) % ln)).collect())
            .collect()
    };
    Ok(FractionalCover::unit(shape.pair_count(), sets)?)
}

/// `ℓ(ℓ-1) / ⌊ℓ/2⌋`, an upper bound on the fractional chromatic number of
/// [`ranking_dependency_graph`].
pub fn ustat_ranking_chi_bound(l: usize) -> Result<Rational, CoversError> {
    if l < 2 {
        return Err(CoversError::SampleTooSmall(l, 2));
    }
    let l = l as i64;
    Ok(Rational::new(l * (l - 1), l / 2))
}

/// Vertex id of the ordered pair `(i, j)`, `i != j`, among the `ℓ(ℓ-1)`
/// ordered pairs of `0..ℓ`.
pub fn ordered_pair_index(l: usize, i: usize, j: usize) -> usize {
    debug_assert!(i != j && i < l && j < l);
    i * (l - 1) + if j < i { j } else { j - 1 }
}

/// Inverse of [`ordered_pair_index`].
pub fn ordered_pair(l: usize, index: usize) -> (usize, usize) {
    let (i, r) = (index / (l - 1), index % (l - 1));
    (i, if r < i { r } else { r + 1 })
}

/// Ordered pairs of `0..ℓ`; two pairs are adjacent when they share an index.
pub fn ranking_dependency_graph(l: usize) -> Result<DependencyGraph, CoversError> {
    if l < 2 {
        return Err(CoversError::SampleTooSmall(l, 2));
    }
    let n = l
        .checked_mul(l - 1)
        .ok_or(CoversError::Overflow { pos: l, neg: l - 1 })?;
    let pairs: Vec<(usize, usize)> = (0..n).map(|v| ordered_pair(l, v)).collect();
    let mut edges = Vec::new();
    for (v, &(i, j)) in pairs.iter().enumerate() {
        for (u, &(p, q)) in pairs.iter().enumerate().skip(v + 1) {
            if i == p || i == q || j == p || j == q {
                edges.push((v, u));
            }
        }
    }
    Ok(DependencyGraph::new(n, edges)?)
}

/// One set per permutation `σ` of `0..ℓ`: the `⌊ℓ/2⌋` disjoint pairs
/// `(σ(i), σ(⌊ℓ/2⌋ + i))`, each set weighted `1 / ((ℓ-2)! ⌊ℓ/2⌋)`.
pub fn ustat_ranking_cover(l: usize) -> Result<FractionalCover, CoversError> {
    if l < 2 {
        return Err(CoversError::SampleTooSmall(l, 2));
    }
    if l > USTAT_COVER_MAX_L {
        return Err(CoversError::TooLarge {
            l,
            cap: USTAT_COVER_MAX_L,
        });
    }
    let half = l / 2;
    let factorial: i64 = (1..=(l as i64 - 2)).product();
    let weight = Rational::new(1, factorial * half as i64);
    let elements = (0..l)
        .permutations(l)
        .map(|sigma| CoverElement {
            vertices: (0..half)
                .map(|i| ordered_pair_index(l, sigma[i], sigma[half + i]))
                .collect(),
            weight,
        })
        .collect();
    Ok(FractionalCover::new(l * (l - 1), elements)?)
}

/// Alternating blocks of length `a`: `Z₀` holds blocks `0, 2, 4, …` and `Z₁`
/// the blocks in between.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    pub block_length: usize,
    pub block_count: usize,
    pub z0_blocks: Vec<Vec<usize>>,
    pub z1_blocks: Vec<Vec<usize>>,
    /// Set when `m` was odd and the last index was left out.
    pub dropped_last: bool,
}

impl BlockDecomposition {
    /// Graph of one subsequence when its blocks are independent: each block a
    /// clique, no edges between blocks. Vertex `s * a + k` is entry `k` of
    /// block `s`.
    pub fn surrogate_graph(&self) -> Result<DependencyGraph, CoversError> {
        let a = self.block_length;
        let edges = (0..self.block_count)
            .flat_map(|s| (0..a).flat_map(move |k| (k + 1..a).map(move |r| (s * a + k, s * a + r))));
        Ok(DependencyGraph::new(self.block_count * a, edges)?)
    }

    /// `a` unit-weight sets, set `k` taking entry `k` of every block.
    pub fn surrogate_cover(&self) -> Result<FractionalCover, CoversError> {
        let a = self.block_length;
        let sets = (0..a)
            .map(|k| (0..self.block_count).map(|s| s * a + k).collect())
            .collect();
        Ok(FractionalCover::unit(self.block_count * a, sets)?)
    }
}

/// Splits `0..m` into `2μ` blocks of length `a`. An odd `m` loses its last
/// index first.
pub fn beta_block_decomposition(m: usize, a: usize) -> Result<BlockDecomposition, CoversError> {
    let dropped_last = m % 2 == 1;
    let even = m - m % 2;
    if a == 0 || even == 0 || !even.is_multiple_of(2 * a) {
        return Err(CoversError::IndivisibleBlocks { m, a });
    }
    let mu = even / (2 * a);
    let block = |start: usize| (start..start + a).collect::<Vec<_>>();
    Ok(BlockDecomposition {
        block_length: a,
        block_count: mu,
        z0_blocks: (0..mu).map(|s| block(2 * s * a)).collect(),
        z1_blocks: (0..mu).map(|s| block(2 * s * a + a)).collect(),
        dropped_last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depgraph::{clique_number, fractional_chromatic_exact, greedy_chromatic_upper, validate_cover};

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn iid() {
        for m in [1, 5] {
            let (g, c) = iid_cover(m).unwrap();
            assert_eq!(g.vertex_count(), m);
            assert_eq!(validate_cover(&g, &c).unwrap().omega_exact, r(1));
        }
    }

    #[test]
    fn bipartite_graph_and_cover() {
        let shape = BipartiteRankingShape::new(4, 2).unwrap();
        let g = bipartite_ranking_graph(shape).unwrap();
        assert_eq!(fractional_chromatic_exact(&g).unwrap().chi_star, r(4));
        let c = bipartite_ranking_cover(shape).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.elements().iter().all(|e| e.vertices.len() == 2));
        assert_eq!(validate_cover(&g, &c).unwrap().omega_exact, r(4));

        let single = BipartiteRankingShape::new(1, 1).unwrap();
        let g = bipartite_ranking_graph(single).unwrap();
        assert!(g.is_edgeless());
        assert_eq!(bipartite_ranking_cover(single).unwrap().elements()[0].vertices, vec![0]);

        let g = bipartite_ranking_graph(BipartiteRankingShape::new(3, 3).unwrap()).unwrap();
        assert!((0..9).all(|v| g.degree(v) == 4));
        assert_eq!(greedy_chromatic_upper(&g), 3);

        let g = bipartite_ranking_graph(BipartiteRankingShape::new(3, 5).unwrap()).unwrap();
        assert_eq!(clique_number(&g).value, 5);

        let shape = BipartiteRankingShape::new(2, 5).unwrap();
        let g = bipartite_ranking_graph(shape).unwrap();
        let c = bipartite_ranking_cover(shape).unwrap();
        assert_eq!(validate_cover(&g, &c).unwrap().omega_exact, r(5));
        assert_eq!(fractional_chromatic_exact(&g).unwrap().chi_star, r(5));
    }

    #[test]
    fn shape_guards() {
        assert!(matches!(
            BipartiteRankingShape::new(0, 3),
            Err(CoversError::EmptyClass { .. })
        ));
        assert!(matches!(
            BipartiteRankingShape::new(usize::MAX, 2),
            Err(CoversError::Overflow { .. })
        ));
        let s = BipartiteRankingShape::new(3, 4).unwrap();
        assert_eq!(s.pair_index(2, 1), 9);
        assert_eq!(s.pair(9), (2, 1));
    }

    #[test]
    fn ustat_bound_values() {
        assert_eq!(ustat_ranking_chi_bound(6).unwrap(), r(10));
        assert_eq!(ustat_ranking_chi_bound(5).unwrap(), r(10));
        assert_eq!(ustat_ranking_chi_bound(2).unwrap(), r(2));
        assert!(ustat_ranking_chi_bound(1).is_err());
    }

    #[test]
    fn ordered_pair_numbering_is_a_bijection() {
        for l in 2..8 {
            for v in 0..l * (l - 1) {
                let (i, j) = ordered_pair(l, v);
                assert!(i != j && i < l && j < l);
                assert_eq!(ordered_pair_index(l, i, j), v);
            }
        }
    }

    #[test]
    fn ustat_covers_validate() {
        for l in 2..=USTAT_COVER_MAX_L {
            let g = ranking_dependency_graph(l).unwrap();
            let c = ustat_ranking_cover(l).unwrap();
            assert_eq!(c.len(), (1..=l).product::<usize>());
            let stats = validate_cover(&g, &c).unwrap();
            assert_eq!(stats.omega_exact, ustat_ranking_chi_bound(l).unwrap());
        }
        let c3 = ustat_ranking_cover(3).unwrap();
        assert!(c3.elements().iter().all(|e| e.vertices.len() == 1 && e.weight == r(1)));
        assert!(matches!(ustat_ranking_cover(8), Err(CoversError::TooLarge { .. })));
    }

    #[test]
    fn ranking_graph_chromatic_values() {
        let g2 = ranking_dependency_graph(2).unwrap();
        assert_eq!(g2.edges(), &[(0, 1)]);
        assert_eq!(fractional_chromatic_exact(&g2).unwrap().chi_star, r(2));
        // Any two 2-subsets of a 3-set meet, so all six ordered pairs are
        // mutually adjacent.
        let g3 = ranking_dependency_graph(3).unwrap();
        assert_eq!(clique_number(&g3).value, 6);
        let g4 = ranking_dependency_graph(4).unwrap();
        assert_eq!(clique_number(&g4).value, 6);
        assert_eq!(fractional_chromatic_exact(&g4).unwrap().chi_star, r(6));
    }

    #[test]
    fn block_decomposition() {
        let d = beta_block_decomposition(12, 2).unwrap();
        assert_eq!(d.block_count, 3);
        assert_eq!(d.z0_blocks, vec![vec![0, 1], vec![4, 5], vec![8, 9]]);
        assert_eq!(d.z1_blocks, vec![vec![2, 3], vec![6, 7], vec![10, 11]]);
        assert!(!d.dropped_last);

        let g = d.surrogate_graph().unwrap();
        let c = d.surrogate_cover().unwrap();
        assert_eq!(validate_cover(&g, &c).unwrap().omega_exact, r(2));
        assert_eq!(fractional_chromatic_exact(&g).unwrap().chi_star, r(2));
        assert_eq!(clique_number(&g).value, 2);
        assert_eq!(greedy_chromatic_upper(&g), 2);

        let d = beta_block_decomposition(2, 1).unwrap();
        assert_eq!(
            (d.block_count, d.z0_blocks.clone(), d.z1_blocks.clone()),
            (1, vec![vec![0]], vec![vec![1]])
        );

        let odd = beta_block_decomposition(13, 3).unwrap();
        assert!(odd.dropped_last);
        assert_eq!(odd.block_count, 2);
        assert_eq!(
            beta_block_decomposition(12, 4),
            Err(CoversError::IndivisibleBlocks { m: 12, a: 4 })
        );
        assert!(beta_block_decomposition(1, 1).is_err());
        assert!(beta_block_decomposition(12, 0).is_err());
    }
}
