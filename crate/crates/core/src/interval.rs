//! Colour sets as finite unions of half-open rational intervals, interval
//! colourings, and the stable-set weighting form of a fractional colouring.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{lcm_denominators, Q};

/// Canonical finite union of half-open intervals `[lo, hi)`: sorted, each
/// nonempty, and separated by a gap (touching intervals are merged).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntervalSet {
    intervals: Vec<(Q, Q)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    /// `[lo, hi)`, or the empty set when `hi <= lo`.
    pub fn interval(lo: Q, hi: Q) -> Self {
        Self::from_intervals(vec![(lo, hi)])
    }

    /// Canonicalizes an arbitrary list of (possibly overlapping) intervals.
    pub fn from_intervals(mut raw: Vec<(Q, Q)>) -> Self {
        raw.retain(|(lo, hi)| lo < hi);
        raw.sort();
        let mut out: Vec<(Q, Q)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match out.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => out.push((lo, hi)),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn intervals(&self) -> &[(Q, Q)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> Q {
        self.intervals
            .iter()
            .fold(Q::zero(), |acc, (lo, hi)| acc + hi - lo)
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut all = self.intervals.clone();
        all.extend(other.intervals.iter().cloned());
        Self::from_intervals(all)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = (&a[i].0).max(&b[j].0).clone();
            let hi = (&a[i].1).min(&b[j].1).clone();
            if lo < hi {
                out.push((lo, hi));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_intervals(out)
    }

    pub fn subtract(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for (lo, hi) in &self.intervals {
            let mut cur = lo.clone();
            for (olo, ohi) in &other.intervals {
                if ohi <= &cur || olo >= hi {
                    continue;
                }
                if olo > &cur {
                    out.push((cur.clone(), olo.clone()));
                }
                if ohi > &cur {
                    cur = ohi.clone();
                }
            }
            if &cur < hi {
                out.push((cur, hi.clone()));
            }
        }
        Self::from_intervals(out)
    }

    pub fn is_disjoint(&self, other: &IntervalSet) -> bool {
        self.intersect(other).is_empty()
    }

    pub fn is_subset(&self, other: &IntervalSet) -> bool {
        self.subtract(other).is_empty()
    }

    /// The leftmost subset of measure exactly `m`.
    pub fn take(&self, m: &Q) -> Result<IntervalSet> {
        let available = self.measure();
        if m > &available || m < &Q::zero() {
            return Err(Error::InsufficientMeasure {
                requested: m.to_string(),
                available: available.to_string(),
            });
        }
        let mut left = m.clone();
        let mut out = Vec::new();
        for (lo, hi) in &self.intervals {
            if left.is_zero() {
                break;
            }
            let len = hi - lo;
            if len <= left {
                out.push((lo.clone(), hi.clone()));
                left -= len;
            } else {
                out.push((lo.clone(), lo + &left));
                left = Q::zero();
            }
        }
        Ok(IntervalSet { intervals: out })
    }

    /// Whether the set lies inside `[0, k)`.
    pub fn within(&self, k: &Q) -> bool {
        self.intervals
            .first()
            .is_none_or(|(lo, _)| lo >= &Q::zero())
            && self.intervals.last().is_none_or(|(_, hi)| hi <= k)
    }
}

/// A fractional colouring: disjoint colour sets inside `[0, k)` assigned to
/// stable sets.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalColouring {
    pub k: Q,
    assignment: Vec<(Vec<usize>, IntervalSet)>,
}

impl IntervalColouring {
    pub fn new(k: Q) -> Self {
        IntervalColouring {
            k,
            assignment: Vec::new(),
        }
    }

    pub fn assignment(&self) -> &[(Vec<usize>, IntervalSet)] {
        &self.assignment
    }

    /// Assigns `colours` to the stable set `set` (merged with any colours the
    /// same set already has). Rejects colours outside `[0, k)` or overlapping
    /// another set's colours.
    pub fn assign(&mut self, mut set: Vec<usize>, colours: IntervalSet) -> Result<()> {
        set.sort_unstable();
        set.dedup();
        if !colours.within(&self.k) {
            return Err(Error::InvalidParameter(format!(
                "colours outside [0, {})",
                self.k
            )));
        }
        for (other, c) in &self.assignment {
            if other != &set && !c.is_disjoint(&colours) {
                return Err(Error::InvalidParameter(format!(
                    "colours of {set:?} overlap those of {other:?}"
                )));
            }
        }
        if colours.is_empty() {
            return Ok(());
        }
        match self.assignment.iter_mut().find(|(s, _)| s == &set) {
            Some((_, c)) => *c = c.union(&colours),
            None => self.assignment.push((set, colours)),
        }
        Ok(())
    }

    /// `κ[v]`.
    pub fn colour_set(&self, v: usize) -> IntervalSet {
        self.assignment
            .iter()
            .filter(|(s, _)| s.binary_search(&v).is_ok())
            .fold(IntervalSet::empty(), |acc, (_, c)| acc.union(c))
    }

    /// `κ[X]`.
    pub fn colour_union(&self, xs: &[usize]) -> IntervalSet {
        self.assignment
            .iter()
            .filter(|(s, _)| xs.iter().any(|v| s.binary_search(v).is_ok()))
            .fold(IntervalSet::empty(), |acc, (_, c)| acc.union(c))
    }

    pub fn coverage(&self, v: usize) -> Q {
        self.colour_set(v).measure()
    }

    /// Removes the vertices `xs` from every colour class.
    pub fn uncolour(&self, xs: &[usize]) -> IntervalColouring {
        let mut out = IntervalColouring::new(self.k.clone());
        for (s, c) in &self.assignment {
            let kept: Vec<usize> = s.iter().copied().filter(|v| !xs.contains(v)).collect();
            out.assign(kept, c.clone()).expect("disjointness is inherited");
        }
        out
    }

    /// Checks every class is stable in `g`, within `[0, k)` and pairwise disjoint.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        for (i, (s, c)) in self.assignment.iter().enumerate() {
            if !g.is_stable(s) {
                return Err(Error::Certificate(format!("class {s:?} is not stable")));
            }
            if !c.within(&self.k) {
                return Err(Error::Certificate(format!("class {s:?} exceeds [0, k)")));
            }
            for (t, d) in &self.assignment[i + 1..] {
                if !c.is_disjoint(d) {
                    return Err(Error::Certificate(format!(
                        "classes {s:?} and {t:?} share colours"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Stable-set weighting with one column per class. Colour unused by any
    /// class becomes a column on the empty set so the weights sum to `k`.
    pub fn to_weighting(&self) -> StableSetWeighting {
        let mut columns: Vec<(Vec<usize>, Q)> = self
            .assignment
            .iter()
            .map(|(s, c)| (s.clone(), c.measure()))
            .filter(|(_, m)| m > &Q::zero())
            .collect();
        let used = columns.iter().fold(Q::zero(), |acc, (_, m)| acc + m);
        let idle = &self.k - used;
        if idle > Q::zero() {
            match columns.iter_mut().find(|(s, _)| s.is_empty()) {
                Some((_, m)) => *m += idle,
                None => columns.push((Vec::new(), idle)),
            }
        }
        StableSetWeighting::new(columns, self.k.clone())
    }
}

/// `α(v) = [0, k) ∖ κ[N(v)]`.
pub fn alpha(g: &Graph, kc: &IntervalColouring, v: usize) -> IntervalSet {
    IntervalSet::interval(Q::zero(), kc.k.clone()).subtract(&kc.colour_union(g.neighbours(v)))
}

/// Positive weights on stable sets; the certificate form of a fractional
/// colouring. `total` is the claimed weight `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StableSetWeighting {
    pub columns: Vec<(Vec<usize>, Q)>,
    pub total: Q,
}

impl StableSetWeighting {
    /// Sorts each set, merges duplicate sets and drops zero-weight columns.
    pub fn new(columns: Vec<(Vec<usize>, Q)>, total: Q) -> Self {
        let mut merged: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
        for (mut s, wt) in columns {
            s.sort_unstable();
            s.dedup();
            *merged.entry(s).or_insert_with(Q::zero) += wt;
        }
        let columns = merged.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        StableSetWeighting { columns, total }
    }

    /// Weighting whose total is the sum of its column weights.
    pub fn from_columns(columns: Vec<(Vec<usize>, Q)>) -> Self {
        let total = columns.iter().fold(Q::zero(), |acc, (_, w)| acc + w);
        Self::new(columns, total)
    }

    pub fn empty() -> Self {
        StableSetWeighting {
            columns: Vec::new(),
            total: Q::zero(),
        }
    }

    pub fn column_sum(&self) -> Q {
        self.columns.iter().fold(Q::zero(), |acc, (_, w)| acc + w)
    }

    /// `Σ_{S ∋ v} weight(S)` for every `v < n`.
    pub fn coverage(&self, n: usize) -> Vec<Q> {
        let mut cov = vec![Q::zero(); n];
        for (s, wt) in &self.columns {
            for &v in s {
                if v < n {
                    cov[v] += wt;
                }
            }
        }
        cov
    }

    /// Concatenation of two weightings (totals add).
    pub fn combine(&self, other: &StableSetWeighting) -> StableSetWeighting {
        let mut cols = self.columns.clone();
        cols.extend(other.columns.iter().cloned());
        Self::new(cols, &self.total + &other.total)
    }

    /// Lays the columns out left to right in `[0, total)`.
    pub fn to_intervals(&self) -> IntervalColouring {
        let mut kc = IntervalColouring::new(self.total.clone());
        let mut offset = Q::zero();
        for (s, wt) in &self.columns {
            let end = &offset + wt;
            kc.assign(s.clone(), IntervalSet::interval(offset.clone(), end.clone()))
                .expect("columns laid out disjointly");
            offset = end;
        }
        kc
    }

    /// Smallest `c` with `c · weight` integral for every column and the total.
    pub fn default_multiplier(&self) -> BigInt {
        lcm_denominators(
            self.columns
                .iter()
                .map(|(_, w)| w)
                .chain(std::iter::once(&self.total)),
        )
    }

    /// Multiset with every column repeated `c · weight` times.
    pub fn to_multiset(&self, c: &BigInt) -> Result<Vec<Vec<usize>>> {
        let cq = Q::from_integer(c.clone());
        let mut out = Vec::new();
        for (s, wt) in &self.columns {
            let copies = &cq * wt;
            if !copies.is_integer() {
                return Err(Error::InvalidParameter(format!(
                    "c = {c} does not make weight {wt} integral"
                )));
            }
            let copies = copies
                .to_integer()
                .to_usize()
                .ok_or_else(|| Error::SizeLimit(format!("{copies} copies of one column")))?;
            out.extend(std::iter::repeat_n(s.clone(), copies));
        }
        Ok(out)
    }

    /// Draws a column with probability `weight / column_sum`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        assert!(!self.columns.is_empty(), "cannot sample an empty weighting");
        let scale = Q::from_integer(lcm_denominators(self.columns.iter().map(|(_, w)| w)));
        let ints: Vec<BigInt> = self
            .columns
            .iter()
            .map(|(_, w)| (w * &scale).to_integer())
            .collect();
        let total: BigInt = ints.iter().sum();
        let mut r = uniform_below(rng, &total);
        for (i, x) in ints.iter().enumerate() {
            if &r < x {
                return self.columns[i].0.clone();
            }
            r -= x;
        }
        unreachable!("r < total")
    }
}

/// Uniform integer in `[0, bound)`; exact for any bound size.
pub(crate) fn uniform_below<R: Rng + ?Sized>(rng: &mut R, bound: &BigInt) -> BigInt {
    assert!(bound > &BigInt::zero());
    if let Some(b) = bound.to_u128() {
        return BigInt::from(rng.gen_range(0..b));
    }
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let excess = bytes as u64 * 8 - bits;
    loop {
        let mut buf = vec![0u8; bytes];
        rng.fill(&mut buf[..]);
        buf[0] &= 0xffu8 >> excess;
        let x = BigInt::from_bytes_be(num::bigint::Sign::Plus, &buf);
        if &x < bound {
            return x;
        }
    }
}

impl Default for StableSetWeighting {
    fn default() -> Self {
        Self::empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle};
    use crate::rational::{frac, q};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn iv(a: i64, b: i64) -> IntervalSet {
        IntervalSet::interval(q(a), q(b))
    }

    #[test]
    fn set_algebra_examples() {
        let u = iv(0, 1).union(&iv(1, 2));
        assert_eq!(u, iv(0, 2));
        assert_eq!(u.measure(), q(2));
        let i = IntervalSet::interval(q(0), frac(3, 2)).intersect(&iv(1, 2));
        assert_eq!(i, IntervalSet::interval(q(1), frac(3, 2)));
        assert_eq!(i.measure(), frac(1, 2));
        let two = iv(0, 1).union(&iv(2, 3));
        let t = two.take(&frac(3, 2)).unwrap();
        assert_eq!(t, iv(0, 1).union(&IntervalSet::interval(q(2), frac(5, 2))));
        assert!(two.take(&q(3)).is_err());
        assert_eq!(iv(0, 5).subtract(&iv(1, 2)), iv(0, 1).union(&iv(2, 5)));
    }

    fn arb_set() -> impl Strategy<Value = IntervalSet> {
        prop::collection::vec((0i64..40, 1i64..10), 0..5).prop_map(|v| {
            IntervalSet::from_intervals(
                v.into_iter()
                    .map(|(a, len)| (frac(a, 4), frac(a + len, 4)))
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn inclusion_exclusion(a in arb_set(), b in arb_set()) {
            prop_assert_eq!(
                a.union(&b).measure() + a.intersect(&b).measure(),
                a.measure() + b.measure()
            );
            prop_assert_eq!(a.subtract(&b).measure() + a.intersect(&b).measure(), a.measure());
            for w in a.union(&b).intervals().windows(2) {
                prop_assert!(w[0].1 < w[1].0);
            }
        }

        #[test]
        fn weighting_round_trip(ws in prop::collection::vec(1i64..12, 1..6)) {
            // columns on the stable sets of C_5: {i, i+2}
            let g = cycle(5).unwrap();
            let cols: Vec<(Vec<usize>, Q)> = ws.iter().enumerate()
                .map(|(i, &w)| (vec![i % 5, (i + 2) % 5], frac(w, 3)))
                .collect();
            let ssw = StableSetWeighting::from_columns(cols);
            let kc = ssw.to_intervals();
            kc.validate(&g).unwrap();
            let back = kc.to_weighting();
            prop_assert_eq!(back.coverage(5), ssw.coverage(5));
            for v in 0..5 {
                prop_assert_eq!(kc.coverage(v), ssw.coverage(5)[v].clone());
            }
        }
    }

    #[test]
    fn alpha_examples() {
        let g = complete_graph(2);
        let kc = IntervalColouring::new(q(5));
        assert_eq!(alpha(&g, &kc, 0), iv(0, 5));
        let mut kc = IntervalColouring::new(q(3));
        kc.assign(vec![0], iv(0, 1)).unwrap();
        assert_eq!(alpha(&g, &kc, 1), iv(1, 3));
    }

    #[test]
    fn c5_partial_colouring_leaves_half() {
        // Every layout of half-unit slots in [0, 5/2) giving the path 0-1-2-3 of
        // C_5 coverage 1 leaves vertex 4 at least 1/2.
        let g = cycle(5).unwrap();
        let pairs: Vec<[usize; 2]> = (0..5)
            .flat_map(|a| (a + 1..5).map(move |b| [a, b]))
            .collect();
        let disjoint = |x: &[usize; 2], y: &[usize; 2]| x.iter().all(|s| !y.contains(s));
        let mut best: Option<Q> = None;
        for p0 in &pairs {
            for p1 in pairs.iter().filter(|p| disjoint(p, p0)) {
                for p2 in pairs.iter().filter(|p| disjoint(p, p1)) {
                    for p3 in pairs.iter().filter(|p| disjoint(p, p2)) {
                        let mut kc = IntervalColouring::new(frac(5, 2));
                        for slot in 0..5 {
                            let members: Vec<usize> = [p0, p1, p2, p3]
                                .iter()
                                .enumerate()
                                .filter(|(_, p)| p.contains(&slot))
                                .map(|(v, _)| v)
                                .collect();
                            let lo = frac(slot as i64, 2);
                            let hi = frac(slot as i64 + 1, 2);
                            kc.assign(members, IntervalSet::interval(lo, hi)).unwrap();
                        }
                        kc.validate(&g).unwrap();
                        let m = alpha(&g, &kc, 4).measure();
                        assert!(m >= frac(1, 2));
                        best = Some(best.map_or(m.clone(), |b| b.min(m)));
                    }
                }
            }
        }
        assert_eq!(best.unwrap(), frac(1, 2));
    }

    #[test]
    fn single_column_to_intervals() {
        let ssw = StableSetWeighting::from_columns(vec![(vec![0, 2], frac(5, 2))]);
        let kc = ssw.to_intervals();
        assert_eq!(kc.assignment(), &[(vec![0, 2], IntervalSet::interval(q(0), frac(5, 2)))]);
    }

    #[test]
    fn c5_multiset() {
        let cols = (0..5).map(|i| (vec![i, (i + 2) % 5], frac(1, 2))).collect();
        let ssw = StableSetWeighting::from_columns(cols);
        assert_eq!(ssw.total, frac(5, 2));
        let c = ssw.default_multiplier();
        assert_eq!(c, BigInt::from(2));
        let ms = ssw.to_multiset(&c).unwrap();
        assert_eq!(ms.len(), 5);
        for v in 0..5 {
            assert_eq!(ms.iter().filter(|s| s.contains(&v)).count(), 2);
        }
        assert!(ssw.to_multiset(&BigInt::from(3)).is_err());
    }

    #[test]
    fn sample_frequencies_within_hoeffding_band() {
        let ssw = StableSetWeighting::from_columns(vec![
            (vec![0], frac(1, 3)),
            (vec![1], frac(1, 2)),
            (vec![0, 2], frac(7, 6)),
        ]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let trials = 100_000;
        let mut hits = [0usize; 3];
        for _ in 0..trials {
            for v in ssw.sample(&mut rng) {
                hits[v] += 1;
            }
        }
        let cov = ssw.coverage(3);
        let band = ((2.0f64 / 1e-3).ln() / (2.0 * trials as f64)).sqrt();
        for v in 0..3 {
            let expect = crate::rational::to_f64(&(&cov[v] / &ssw.total));
            let got = hits[v] as f64 / trials as f64;
            assert!((got - expect).abs() <= band, "v={v} got={got} expect={expect}");
        }
    }

    #[test]
    fn uniform_below_big_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let bound = num::pow(BigInt::from(10), 50);
        for _ in 0..100 {
            let x = uniform_below(&mut rng, &bound);
            assert!(x >= BigInt::zero() && x < bound);
        }
    }
}
