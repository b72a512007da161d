//! Labeled simple graphs on {1,...,n} stored as bitsets over unordered
//! vertex pairs, plus the Hamming metric between them.

use crate::error::{Error, Result};

/// Exhaustive enumeration is capped at this vertex count (2^21 graphs at n = 7).
pub const MAX_ENUMERATION_N: usize = 7;

/// Number of unordered vertex pairs, m = n(n-1)/2.
#[inline]
pub const fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Linear position of the pair (i, j), 1 <= i < j <= n, in the canonical
/// order: row-major over the strict upper triangle, so (1,2), (1,3), ...,
/// (1,n), (2,3), ..., (n-1,n).
#[inline]
fn pair_to_linear(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= n);
    (i - 1) * n - i * (i - 1) / 2 + (j - i - 1)
}

/// Inverse of [`pair_to_linear`].
fn linear_to_pair(linear: usize, n: usize) -> (usize, usize) {
    debug_assert!(linear < pair_count(n));
    let mut i = 1;
    let mut row_start = 0;
    // Row i holds n - i pairs.
    while row_start + (n - i) <= linear {
        row_start += n - i;
        i += 1;
    }
    let j = i + 1 + (linear - row_start);
    (i, j)
}

/// An unordered vertex pair (i, j), 1 <= i < j <= n, together with its
/// position in the canonical pair order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairIndex {
    i: usize,
    j: usize,
    linear: usize,
}

impl PairIndex {
    /// Builds the index for vertices (i, j); vertices are 1-based.
    pub fn from_vertices(i: usize, j: usize, n: usize) -> Result<Self> {
        if i < 1 || i >= j || j > n {
            return Err(Error::InvalidPair { i, j, n });
        }
        Ok(PairIndex {
            i,
            j,
            linear: pair_to_linear(i, j, n),
        })
    }

    /// Builds the index from a canonical linear position.
    ///
    /// Panics if `linear >= pair_count(n)`.
    pub fn from_linear(linear: usize, n: usize) -> Self {
        assert!(
            linear < pair_count(n),
            "pair index {linear} out of range for n = {n}"
        );
        let (i, j) = linear_to_pair(linear, n);
        PairIndex { i, j, linear }
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn linear(&self) -> usize {
        self.linear
    }
}

/// Adjacency matrix of a labeled simple graph on {1,...,n}.
///
/// Only the strict upper triangle is stored, one bit per unordered pair in
/// canonical order, so symmetry and the zero diagonal hold structurally.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdjacencyMatrix {
    n: usize,
    bits: Vec<u64>,
}

impl AdjacencyMatrix {
    /// The empty graph on n vertices. Panics if n = 0.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "vertex count must be positive");
        let words = pair_count(n).div_ceil(64);
        AdjacencyMatrix {
            n,
            bits: vec![0; words],
        }
    }

    /// The complete graph on n vertices.
    pub fn complete(n: usize) -> Self {
        let mut g = AdjacencyMatrix::new(n);
        let m = g.pair_count();
        for t in 0..m {
            g.bits[t / 64] |= 1u64 << (t % 64);
        }
        g
    }

    /// Builds a graph whose bitset equals the low m bits of `bits`.
    /// Requires m <= 64; used by the enumeration and oracle fast paths.
    pub(crate) fn from_bits(n: usize, bits: u64) -> Self {
        let m = pair_count(n);
        debug_assert!(m <= 64);
        debug_assert!(m == 64 || bits < (1u64 << m));
        let mut g = AdjacencyMatrix::new(n);
        if m > 0 {
            g.bits[0] = bits;
        }
        g
    }

    /// The bitset as a single word. Requires m <= 64.
    pub(crate) fn to_bits(&self) -> u64 {
        debug_assert!(self.pair_count() <= 64);
        self.bits.first().copied().unwrap_or(0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of unordered pairs, m = n(n-1)/2.
    pub fn pair_count(&self) -> usize {
        pair_count(self.n)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let t = pair_to_linear(i.min(j), i.max(j), self.n);
        self.bit(t)
    }

    pub fn set_edge(&mut self, i: usize, j: usize) {
        assert!(
            i >= 1 && i != j && i <= self.n && j <= self.n,
            "invalid pair ({i},{j}) for n = {}",
            self.n
        );
        let t = pair_to_linear(i.min(j), i.max(j), self.n);
        self.bits[t / 64] |= 1u64 << (t % 64);
    }

    pub fn clear_edge(&mut self, i: usize, j: usize) {
        assert!(
            i >= 1 && i != j && i <= self.n && j <= self.n,
            "invalid pair ({i},{j}) for n = {}",
            self.n
        );
        let t = pair_to_linear(i.min(j), i.max(j), self.n);
        self.bits[t / 64] &= !(1u64 << (t % 64));
    }

    /// Edge indicator at canonical linear position t.
    #[inline]
    pub fn bit(&self, t: usize) -> bool {
        debug_assert!(t < self.pair_count());
        self.bits[t / 64] >> (t % 64) & 1 == 1
    }

    /// Sets the edge indicator at canonical linear position t.
    #[inline]
    pub fn set_bit(&mut self, t: usize, value: bool) {
        debug_assert!(t < self.pair_count());
        if value {
            self.bits[t / 64] |= 1u64 << (t % 64);
        } else {
            self.bits[t / 64] &= !(1u64 << (t % 64));
        }
    }

    /// Number of edges, |E|.
    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Edges in canonical pair order.
    pub fn edges(&self) -> impl Iterator<Item = PairIndex> + '_ {
        (0..self.pair_count())
            .filter(|&t| self.bit(t))
            .map(|t| PairIndex::from_linear(t, self.n))
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Writes the graph text fixture format: first line `n`, then one line
    /// `i j` per edge in canonical pair order.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for e in self.edges() {
            out.push_str(&format!("{} {}\n", e.i(), e.j()));
        }
        out
    }

    /// Parses the graph text fixture format.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty graph file".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad vertex count: {e}")))?;
        if n == 0 {
            return Err(Error::Parse("vertex count must be positive".into()));
        }
        let mut g = AdjacencyMatrix::new(n);
        for line in lines {
            let mut it = line.split_whitespace();
            let (i, j) = match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => return Err(Error::Parse(format!("bad edge line: {line:?}"))),
            };
            let i: usize = i
                .parse()
                .map_err(|e| Error::Parse(format!("bad vertex in {line:?}: {e}")))?;
            let j: usize = j
                .parse()
                .map_err(|e| Error::Parse(format!("bad vertex in {line:?}: {e}")))?;
            let pair = PairIndex::from_vertices(i, j, n)
                .map_err(|_| Error::Parse(format!("edge ({i},{j}) is not 1 <= i < j <= {n}")))?;
            g.set_bit(pair.linear(), true);
        }
        Ok(g)
    }
}

/// Hamming distance: the number of unordered pairs on which the two edge
/// indicators differ. Equals the popcount of the XOR of the bitsets.
pub fn hamming_distance(a: &AdjacencyMatrix, b: &AdjacencyMatrix) -> Result<u64> {
    a.check_same_n(b)?;
    Ok(a.bits
        .iter()
        .zip(&b.bits)
        .map(|(x, y)| (x ^ y).count_ones() as u64)
        .sum())
}

/// Squared Hamming distance evaluated through its four-term split over the
/// edges and non-edges of `b`:
///
/// |E(a)|^2 + |E(b)|^2 + 2|E(b)|(s_out - s_in) - 4 s_in s_out,
///
/// where s_in is the number of edges of `a` lying on edges of `b` and s_out
/// the number lying on non-edges of `b`. Equals `hamming_distance(a, b)^2`.
pub fn squared_hamming_decomposed(a: &AdjacencyMatrix, b: &AdjacencyMatrix) -> Result<u64> {
    a.check_same_n(b)?;
    let ea = a.edge_count() as i64;
    let eb = b.edge_count() as i64;
    let s_in: i64 = a
        .bits
        .iter()
        .zip(&b.bits)
        .map(|(x, y)| (x & y).count_ones() as i64)
        .sum();
    let s_out = ea - s_in;
    let total = ea * ea + eb * eb + 2 * eb * (s_out - s_in) - 4 * s_in * s_out;
    debug_assert!(total >= 0);
    Ok(total as u64)
}

/// Iterator over every labeled simple graph on n vertices, in bitset-integer
/// order. There are 2^(n(n-1)/2) of them, so n is capped at
/// [`MAX_ENUMERATION_N`].
pub fn enumerate_all_graphs(n: usize) -> Result<GraphEnumeration> {
    if n == 0 || n > MAX_ENUMERATION_N {
        return Err(Error::Budget {
            what: "graph enumeration",
            n,
            max_n: MAX_ENUMERATION_N,
        });
    }
    Ok(GraphEnumeration {
        n,
        next: 0,
        end: 1u64 << pair_count(n),
    })
}

/// See [`enumerate_all_graphs`].
pub struct GraphEnumeration {
    n: usize,
    next: u64,
    end: u64,
}

impl Iterator for GraphEnumeration {
    type Item = AdjacencyMatrix;

    fn next(&mut self) -> Option<AdjacencyMatrix> {
        if self.next == self.end {
            return None;
        }
        let g = AdjacencyMatrix::from_bits(self.n, self.next);
        self.next += 1;
        Some(g)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for GraphEnumeration {}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn graph_from_bools(n: usize, bits: &[bool]) -> AdjacencyMatrix {
        let mut g = AdjacencyMatrix::new(n);
        for (t, &b) in bits.iter().enumerate() {
            g.set_bit(t, b);
        }
        g
    }

    #[test]
    fn pair_indexing_round_trips_up_to_n_64() {
        for n in 2..=64 {
            let mut seen = vec![false; pair_count(n)];
            for i in 1..=n {
                for j in (i + 1)..=n {
                    let p = PairIndex::from_vertices(i, j, n).unwrap();
                    assert!(!seen[p.linear()], "collision at ({i},{j}), n={n}");
                    seen[p.linear()] = true;
                    let back = PairIndex::from_linear(p.linear(), n);
                    assert_eq!((back.i(), back.j()), (i, j));
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn canonical_order_is_row_major() {
        // n = 4: (1,2) (1,3) (1,4) (2,3) (2,4) (3,4)
        let expected = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];
        for (t, &(i, j)) in expected.iter().enumerate() {
            assert_eq!(pair_to_linear(i, j, 4), t);
            assert_eq!(linear_to_pair(t, 4), (i, j));
        }
    }

    #[test]
    fn invalid_pairs_are_rejected() {
        assert!(PairIndex::from_vertices(0, 2, 4).is_err());
        assert!(PairIndex::from_vertices(2, 2, 4).is_err());
        assert!(PairIndex::from_vertices(3, 2, 4).is_err());
        assert!(PairIndex::from_vertices(1, 5, 4).is_err());
    }

    #[test]
    fn hamming_identity_is_zero() {
        let mut g = AdjacencyMatrix::new(5);
        g.set_edge(1, 4);
        g.set_edge(2, 3);
        assert_eq!(hamming_distance(&g, &g).unwrap(), 0);
    }

    #[test]
    fn hamming_complete_vs_empty_n3() {
        let full = AdjacencyMatrix::complete(3);
        let empty = AdjacencyMatrix::new(3);
        assert_eq!(hamming_distance(&full, &empty).unwrap(), 3);
    }

    #[test]
    fn hamming_path_vs_single_edge_n3() {
        // path 1-2-3 vs the lone edge {1,3}: all three pairs differ.
        let mut path = AdjacencyMatrix::new(3);
        path.set_edge(1, 2);
        path.set_edge(2, 3);
        let mut other = AdjacencyMatrix::new(3);
        other.set_edge(1, 3);
        // oracle: direct sum over |a_ij - b_ij|
        let direct: u64 = (0..3)
            .map(|t| (path.bit(t) != other.bit(t)) as u64)
            .sum();
        assert_eq!(direct, 3);
        assert_eq!(hamming_distance(&path, &other).unwrap(), 3);
    }

    #[test]
    fn hamming_rejects_dimension_mismatch() {
        let a = AdjacencyMatrix::new(3);
        let b = AdjacencyMatrix::new(4);
        assert_eq!(
            hamming_distance(&a, &b),
            Err(Error::DimensionMismatch { left: 3, right: 4 })
        );
        assert!(squared_hamming_decomposed(&a, &b).is_err());
    }

    #[test]
    fn decomposed_square_trivial_cases() {
        let empty = AdjacencyMatrix::new(3);
        assert_eq!(squared_hamming_decomposed(&empty, &empty).unwrap(), 0);
        let full = AdjacencyMatrix::complete(3);
        // only the |E(b)|^2 term survives: 3^2
        assert_eq!(squared_hamming_decomposed(&empty, &full).unwrap(), 9);
    }

    #[test]
    fn decomposed_square_matches_distance_squared_seeded_n5() {
        // fixed bit patterns at n = 5 (m = 10)
        let a = AdjacencyMatrix::from_bits(5, 0b1011001110);
        let b = AdjacencyMatrix::from_bits(5, 0b0110101011);
        let d = hamming_distance(&a, &b).unwrap();
        assert_eq!(squared_hamming_decomposed(&a, &b).unwrap(), d * d);
    }

    #[test]
    fn edge_count_examples() {
        assert_eq!(AdjacencyMatrix::new(4).edge_count(), 0);
        assert_eq!(AdjacencyMatrix::complete(4).edge_count(), 6);
        let mut g = AdjacencyMatrix::new(6);
        g.set_edge(2, 5);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_all_graphs(2).unwrap().count(), 2);
        assert_eq!(enumerate_all_graphs(3).unwrap().count(), 8);
    }

    #[test]
    fn enumeration_n5_distinct() {
        let all: HashSet<AdjacencyMatrix> = enumerate_all_graphs(5).unwrap().collect();
        assert_eq!(all.len(), 1024);
    }

    #[test]
    fn enumeration_over_cap_is_budget_error() {
        let err = enumerate_all_graphs(8).unwrap_err();
        assert!(err.is_budget());
        assert!(err.to_string().contains("n <= 7"));
    }

    #[test]
    fn text_format_round_trip() {
        let mut g = AdjacencyMatrix::new(4);
        g.set_edge(1, 3);
        g.set_edge(2, 4);
        g.set_edge(3, 4);
        let text = g.to_text();
        assert_eq!(text, "4\n1 3\n2 4\n3 4\n");
        assert_eq!(AdjacencyMatrix::from_text(&text).unwrap(), g);
    }

    #[test]
    fn text_format_rejects_bad_input() {
        assert!(AdjacencyMatrix::from_text("").is_err());
        assert!(AdjacencyMatrix::from_text("3\n2 2\n").is_err());
        assert!(AdjacencyMatrix::from_text("3\n3 1\n").is_err());
        assert!(AdjacencyMatrix::from_text("3\n1 4\n").is_err());
        assert!(AdjacencyMatrix::from_text("3\n1\n").is_err());
    }

    proptest! {
        #[test]
        fn hamming_is_a_metric(
            n in 2usize..12,
            seed_a in proptest::collection::vec(any::<bool>(), 66),
            seed_b in proptest::collection::vec(any::<bool>(), 66),
            seed_c in proptest::collection::vec(any::<bool>(), 66),
        ) {
            let m = pair_count(n);
            let a = graph_from_bools(n, &seed_a[..m]);
            let b = graph_from_bools(n, &seed_b[..m]);
            let c = graph_from_bools(n, &seed_c[..m]);
            let dab = hamming_distance(&a, &b).unwrap();
            let dba = hamming_distance(&b, &a).unwrap();
            let dac = hamming_distance(&a, &c).unwrap();
            let dcb = hamming_distance(&c, &b).unwrap();
            prop_assert_eq!(dab, dba);
            prop_assert_eq!(dab == 0, a == b);
            prop_assert!(dab <= dac + dcb);
        }

        #[test]
        fn decomposition_equals_squared_distance(
            n in 5usize..=16,
            seed_a in proptest::collection::vec(any::<bool>(), 120),
            seed_b in proptest::collection::vec(any::<bool>(), 120),
        ) {
            let m = pair_count(n);
            let a = graph_from_bools(n, &seed_a[..m]);
            let b = graph_from_bools(n, &seed_b[..m]);
            let d = hamming_distance(&a, &b).unwrap();
            prop_assert_eq!(squared_hamming_decomposed(&a, &b).unwrap(), d * d);
        }
    }
}
