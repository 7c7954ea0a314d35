//! Homogeneous binary forms over F_q (sections of O(d) on P¹), the
//! basepoint-free predicate via gcd degree (including the point at infinity),
//! and deterministic, partitionable enumeration of tuple coefficient spaces.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite_field::{FieldElement, FieldSpec, FieldTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("partition index {index} out of range for total {total}")]
    PartitionOutOfRange { index: u64, total: u64 },
    #[error("form {i} has degree {got}, expected n*lambda_i = {want}")]
    DegreeMismatch { i: usize, got: usize, want: usize },
    #[error("weight vector must be nonempty with positive entries")]
    BadWeights,
}

/// Weights λ_0,…,λ_N of a weighted projective stack P(λ).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightVector {
    lambdas: Vec<u64>,
}

impl WeightVector {
    pub fn new(lambdas: Vec<u64>) -> Result<Self, FormError> {
        if lambdas.is_empty() || lambdas.iter().any(|&l| l == 0) {
            return Err(FormError::BadWeights);
        }
        Ok(WeightVector { lambdas })
    }

    pub fn lambdas(&self) -> &[u64] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// N, the dimension of P(λ).
    pub fn big_n(&self) -> usize {
        self.lambdas.len() - 1
    }

    /// |λ| = Σ λ_i.
    pub fn total(&self) -> u64 {
        self.lambdas.iter().sum()
    }

    pub fn lcm(&self) -> u64 {
        self.lambdas
            .iter()
            .fold(1u64, |acc, &l| num_integer::lcm(acc, l))
    }

    pub fn gcd(&self) -> u64 {
        self.lambdas
            .iter()
            .fold(0u64, |acc, &l| num_integer::gcd(acc, l))
    }

    /// η_i = lcm(λ)/λ_i.
    pub fn etas(&self) -> Vec<u64> {
        let l = self.lcm();
        self.lambdas.iter().map(|&li| l / li).collect()
    }

    /// Sub-vector of weights divisible by d (indices retained in order).
    pub fn restrict_divisible(&self, d: u64) -> Vec<u64> {
        self.lambdas.iter().copied().filter(|l| l % d == 0).collect()
    }
}

/// A homogeneous binary form of degree d; `coeffs[i]` is the coefficient of
/// x^i y^{d−i}. The zero form (all coefficients zero) is permitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    pub degree: usize,
    pub coeffs: Vec<FieldElement>,
}

impl BinaryForm {
    pub fn new(degree: usize, coeffs: Vec<FieldElement>) -> Self {
        assert_eq!(coeffs.len(), degree + 1);
        BinaryForm { degree, coeffs }
    }

    pub fn is_zero(&self, spec: &FieldSpec) -> bool {
        self.coeffs.iter().all(|c| spec.is_zero(c))
    }
}

/// A tuple (s_0,…,s_N) of binary forms with deg s_i = n·λ_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormTuple {
    pub forms: Vec<BinaryForm>,
    pub weights: WeightVector,
    pub n: u64,
}

impl FormTuple {
    pub fn new(forms: Vec<BinaryForm>, weights: WeightVector, n: u64) -> Result<Self, FormError> {
        if forms.len() != weights.len() {
            return Err(FormError::BadWeights);
        }
        for (i, f) in forms.iter().enumerate() {
            let want = (n * weights.lambdas()[i]) as usize;
            if f.degree != want {
                return Err(FormError::DegreeMismatch {
                    i,
                    got: f.degree,
                    want,
                });
            }
        }
        Ok(FormTuple { forms, weights, n })
    }
}

/// Degree of the common divisor of a form tuple; `Infinite` when every form
/// is zero (the common-zero locus is all of P¹).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcdDegree {
    Finite(usize),
    Infinite,
}

/// Arithmetic on element ranks, so the gcd kernel runs identically on the
/// precomputed-table fast path and the generic FieldSpec path.
pub trait RankArith {
    fn add(&self, a: u16, b: u16) -> u16;
    fn mul(&self, a: u16, b: u16) -> u16;
    fn inv(&self, a: u16) -> u16;
    fn neg(&self, a: u16) -> u16;
}

impl RankArith for FieldTable {
    #[inline(always)]
    fn add(&self, a: u16, b: u16) -> u16 {
        FieldTable::add(self, a, b)
    }
    #[inline(always)]
    fn mul(&self, a: u16, b: u16) -> u16 {
        FieldTable::mul(self, a, b)
    }
    #[inline(always)]
    fn inv(&self, a: u16) -> u16 {
        FieldTable::inv(self, a)
    }
    #[inline(always)]
    fn neg(&self, a: u16) -> u16 {
        FieldTable::neg(self, a)
    }
}

/// Rank arithmetic computed directly from a FieldSpec (no tables); used when
/// the cardinality is too large for table precomputation.
pub struct SpecRanks<'a>(pub &'a FieldSpec);

impl RankArith for SpecRanks<'_> {
    fn add(&self, a: u16, b: u16) -> u16 {
        let s = self.0;
        s.rank_of(&s.add(&s.element_from_rank(a as u64), &s.element_from_rank(b as u64))) as u16
    }
    fn mul(&self, a: u16, b: u16) -> u16 {
        let s = self.0;
        s.rank_of(&s.mul(&s.element_from_rank(a as u64), &s.element_from_rank(b as u64))) as u16
    }
    fn inv(&self, a: u16) -> u16 {
        let s = self.0;
        s.rank_of(&s.inv(&s.element_from_rank(a as u64)).unwrap()) as u16
    }
    fn neg(&self, a: u16) -> u16 {
        let s = self.0;
        s.rank_of(&s.neg(&s.element_from_rank(a as u64))) as u16
    }
}

#[inline]
fn top_nonzero(coeffs: &[u16]) -> Option<usize> {
    coeffs.iter().rposition(|&c| c != 0)
}

/// In-place Euclidean step: a mod b over F_q, on little-endian rank slices.
/// `b` must be nonzero; `alen`/`blen` are the active lengths (deg + 1).
fn rank_poly_rem<A: RankArith>(f: &A, a: &mut Vec<u16>, b: &[u16]) {
    let db = top_nonzero(b).expect("divisor must be nonzero");
    let lead_inv = f.inv(b[db]);
    loop {
        let da = match top_nonzero(a) {
            Some(d) if d >= db => d,
            _ => break,
        };
        let factor = f.mul(a[da], lead_inv);
        let nfactor = f.neg(factor);
        let shift = da - db;
        for i in 0..=db {
            if b[i] != 0 {
                a[shift + i] = f.add(a[shift + i], f.mul(nfactor, b[i]));
            }
        }
        debug_assert_eq!(a[da], 0);
        a.truncate(da);
    }
}

/// Degree of gcd of a set of dehomogenized polynomials given as rank slices;
/// zero polynomials are skipped. Returns None when every input is zero.
fn rank_gcd_degree<A: RankArith>(f: &A, polys: &[&[u16]]) -> Option<usize> {
    let mut g: Vec<u16> = Vec::new();
    for p in polys {
        if top_nonzero(p).is_none() {
            continue;
        }
        if g.is_empty() {
            g = p.to_vec();
        } else {
            let mut a = p.to_vec();
            // gcd(g, p)
            loop {
                rank_poly_rem(f, &mut a, &g);
                if top_nonzero(&a).is_none() {
                    break;
                }
                std::mem::swap(&mut a, &mut g);
            }
        }
        if top_nonzero(&g) == Some(0) {
            return Some(0); // gcd already trivial, early out
        }
    }
    top_nonzero(&g)
}

/// Core predicate shared by the public API and the enumeration oracles:
/// gcd degree of a tuple given as concatenated coefficient ranks.
/// `degrees[i]` is the degree of form i; `coeffs` holds degree+1 ranks each.
pub fn gcd_degree_ranks<A: RankArith>(f: &A, degrees: &[usize], coeffs: &[u16]) -> GcdDegree {
    let mut min_inf: Option<usize> = None;
    let mut polys: Vec<&[u16]> = Vec::with_capacity(degrees.len());
    let mut off = 0;
    for &d in degrees {
        let slice = &coeffs[off..off + d + 1];
        off += d + 1;
        if let Some(deg_x) = top_nonzero(slice) {
            let inf = d - deg_x;
            min_inf = Some(min_inf.map_or(inf, |m| m.min(inf)));
            polys.push(slice);
        }
    }
    let min_inf = match min_inf {
        Some(m) => m,
        None => return GcdDegree::Infinite, // all forms zero
    };
    let affine = rank_gcd_degree(f, &polys).unwrap_or(0);
    GcdDegree::Finite(affine + min_inf)
}

/// Fast basepoint-free test on concatenated coefficient ranks.
#[inline]
pub fn is_basepoint_free_ranks<A: RankArith>(f: &A, degrees: &[usize], coeffs: &[u16]) -> bool {
    // cheap rejection: some form must have a nonzero leading coefficient
    // (otherwise [1:0] is a common zero), and some a nonzero constant term
    // (otherwise [0:1] is).
    let mut off = 0;
    let mut lead_ok = false;
    let mut const_ok = false;
    for &d in degrees {
        lead_ok |= coeffs[off + d] != 0;
        const_ok |= coeffs[off] != 0;
        off += d + 1;
    }
    if !lead_ok || !const_ok {
        return false;
    }
    gcd_degree_ranks(f, degrees, coeffs) == GcdDegree::Finite(0)
}

fn tuple_ranks(spec: &FieldSpec, t: &FormTuple) -> (Vec<usize>, Vec<u16>) {
    let degrees: Vec<usize> = t.forms.iter().map(|f| f.degree).collect();
    let mut coeffs = Vec::with_capacity(degrees.iter().map(|d| d + 1).sum());
    for f in &t.forms {
        for c in &f.coeffs {
            coeffs.push(spec.rank_of(c) as u16);
        }
    }
    (degrees, coeffs)
}

/// Degree of the gcd of the tuple's forms as binary forms: gcd of the
/// dehomogenized parts (y=1) plus the common multiplicity at [1:0].
pub fn tuple_gcd_degree(spec: &FieldSpec, t: &FormTuple) -> GcdDegree {
    let (degrees, coeffs) = tuple_ranks(spec, t);
    gcd_degree_ranks(&SpecRanks(spec), &degrees, &coeffs)
}

/// True iff the forms have no common zero over the algebraic closure,
/// i.e. the tuple is an F_q-point of the torsor space over Hom_n.
pub fn is_basepoint_free(spec: &FieldSpec, t: &FormTuple) -> bool {
    match tuple_gcd_degree(spec, t) {
        GcdDegree::Finite(0) => true,
        _ => false,
    }
}

/// The coefficient space of all form tuples for (F_q, λ, n), with
/// deterministic mixed-radix enumeration and contiguous partitioning.
pub struct TupleSpace {
    pub spec: FieldSpec,
    pub weights: WeightVector,
    pub n: u64,
    pub degrees: Vec<usize>,
    /// number of coefficient slots M = Σ (nλ_i + 1)
    pub slots: usize,
    /// q^M, the number of tuples
    pub card: u128,
}

impl TupleSpace {
    pub fn new(spec: &FieldSpec, w: &WeightVector, n: u64) -> Self {
        let degrees: Vec<usize> = w.lambdas().iter().map(|&l| (n * l) as usize).collect();
        let slots: usize = degrees.iter().map(|d| d + 1).sum();
        let mut card: u128 = 1;
        for _ in 0..slots {
            card = card
                .checked_mul(spec.q as u128)
                .expect("tuple space exceeds 128-bit counter");
        }
        TupleSpace {
            spec: spec.clone(),
            weights: w.clone(),
            n,
            degrees,
            slots,
            card,
        }
    }

    /// Contiguous rank range [start, end) of partition `index` of `total`.
    /// The union over all indices is the full space, each rank exactly once.
    pub fn part_range(&self, index: u64, total: u64) -> Result<(u128, u128), FormError> {
        if total == 0 || index >= total {
            return Err(FormError::PartitionOutOfRange { index, total });
        }
        let t = total as u128;
        let quot = self.card / t;
        let rem = self.card % t;
        // floor(card * i / total) without overflow
        let bound = |i: u128| quot * i + (rem * i) / t;
        Ok((bound(index as u128), bound(index as u128 + 1)))
    }

    /// Coefficient-rank vector of the tuple with the given rank
    /// (mixed-radix little-endian, digit base q).
    pub fn decode(&self, mut rank: u128) -> Vec<u16> {
        let q = self.spec.q as u128;
        let mut digits = vec![0u16; self.slots];
        for d in digits.iter_mut() {
            *d = (rank % q) as u16;
            rank /= q;
        }
        digits
    }

    /// Visit every coefficient vector with rank in [start, end), in order.
    pub fn for_each_in_range<F: FnMut(&[u16])>(&self, start: u128, end: u128, mut visit: F) {
        if start >= end {
            return;
        }
        let q = self.spec.q as u16;
        let mut digits = self.decode(start);
        let mut remaining = end - start;
        loop {
            visit(&digits);
            remaining -= 1;
            if remaining == 0 {
                break;
            }
            // odometer increment
            for d in digits.iter_mut() {
                *d += 1;
                if *d < q {
                    break;
                }
                *d = 0;
            }
        }
    }

    /// Materialize a coefficient-rank vector into a FormTuple.
    pub fn materialize(&self, coeffs: &[u16]) -> FormTuple {
        let mut forms = Vec::with_capacity(self.degrees.len());
        let mut off = 0;
        for &d in &self.degrees {
            let cs = coeffs[off..off + d + 1]
                .iter()
                .map(|&r| self.spec.element_from_rank(r as u64))
                .collect();
            off += d + 1;
            forms.push(BinaryForm::new(d, cs));
        }
        FormTuple {
            forms,
            weights: self.weights.clone(),
            n: self.n,
        }
    }
}

/// Stream the form tuples of partition (index, total) in deterministic order.
pub fn tuple_space_iter(
    spec: &FieldSpec,
    w: &WeightVector,
    n: u64,
    index: u64,
    total: u64,
) -> Result<impl Iterator<Item = FormTuple>, FormError> {
    let space = TupleSpace::new(spec, w, n);
    let (start, end) = space.part_range(index, total)?;
    Ok((0..(end - start)).map(move |i| {
        let coeffs = space.decode(start + i);
        space.materialize(&coeffs)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::from_q(q).unwrap()
    }

    fn form(spec: &FieldSpec, degree: usize, coeffs: &[u64]) -> BinaryForm {
        BinaryForm::new(
            degree,
            coeffs.iter().map(|&c| spec.scalar(c)).collect(),
        )
    }

    fn gcd_of(spec: &FieldSpec, forms: Vec<BinaryForm>) -> GcdDegree {
        let degrees: Vec<usize> = forms.iter().map(|f| f.degree).collect();
        let mut coeffs = Vec::new();
        for fm in &forms {
            for c in &fm.coeffs {
                coeffs.push(spec.rank_of(c) as u16);
            }
        }
        gcd_degree_ranks(&SpecRanks(spec), &degrees, &coeffs)
    }

    #[test]
    fn gcd_examples() {
        let f3 = f(3);
        // (x, y): coprime
        let x = form(&f3, 1, &[0, 1]);
        let y = form(&f3, 1, &[1, 0]);
        assert_eq!(gcd_of(&f3, vec![x, y]), GcdDegree::Finite(0));
        // x^2+y^2 and x^2-y^2 over F_3: coprime
        let a = form(&f3, 2, &[1, 0, 1]);
        let b = form(&f3, 2, &[2, 0, 1]);
        assert_eq!(gcd_of(&f3, vec![a, b]), GcdDegree::Finite(0));
        // (xy, x^2): common factor x
        let xy = form(&f3, 2, &[0, 1, 0]);
        let x2 = form(&f3, 2, &[0, 0, 1]);
        assert_eq!(gcd_of(&f3, vec![xy, x2]), GcdDegree::Finite(1));
        // all-zero tuple
        let z = form(&f3, 2, &[0, 0, 0]);
        assert_eq!(gcd_of(&f3, vec![z.clone(), z]), GcdDegree::Infinite);
        // single positive-degree form with a zero partner
        let x2 = form(&f3, 2, &[0, 0, 1]);
        let z4 = form(&f3, 4, &[0, 0, 0, 0, 0]);
        assert_eq!(gcd_of(&f3, vec![x2, z4]), GcdDegree::Finite(2));
    }

    #[test]
    fn bpf_examples() {
        let f3 = f(3);
        let w = WeightVector::new(vec![1, 1]).unwrap();
        let x = form(&f3, 1, &[0, 1]);
        let y = form(&f3, 1, &[1, 0]);
        let t = FormTuple::new(vec![x, y], w.clone(), 1).unwrap();
        assert!(is_basepoint_free(&f3, &t));
        let z = form(&f3, 1, &[0, 0]);
        let t = FormTuple::new(vec![z.clone(), z], w, 1).unwrap();
        assert!(!is_basepoint_free(&f3, &t));
    }

    #[test]
    fn degree_mismatch_rejected() {
        let f3 = f(3);
        let w = WeightVector::new(vec![1, 2]).unwrap();
        let x = form(&f3, 1, &[0, 1]);
        let bad = FormTuple::new(vec![x.clone(), x], w, 1);
        assert!(matches!(bad, Err(FormError::DegreeMismatch { .. })));
    }

    #[test]
    fn space_cardinalities() {
        let f3 = f(3);
        let w = WeightVector::new(vec![1, 2]).unwrap();
        let all: Vec<_> = tuple_space_iter(&f3, &w, 1, 0, 1).unwrap().collect();
        assert_eq!(all.len(), 243); // 3^5
        let f2 = f(2);
        let w11 = WeightVector::new(vec![1, 1]).unwrap();
        assert_eq!(tuple_space_iter(&f2, &w11, 1, 0, 1).unwrap().count(), 16);
    }

    #[test]
    fn partitions_cover_disjointly() {
        let f3 = f(3);
        let w = WeightVector::new(vec![1, 2]).unwrap();
        let space = TupleSpace::new(&f3, &w, 1);
        for total in [1u64, 3, 7] {
            let mut seen: HashSet<Vec<u16>> = HashSet::new();
            let mut count = 0u64;
            for idx in 0..total {
                let (s, e) = space.part_range(idx, total).unwrap();
                space.for_each_in_range(s, e, |c| {
                    assert!(seen.insert(c.to_vec()), "duplicate tuple across partitions");
                    count += 1;
                });
            }
            assert_eq!(count, 243);
        }
        // equal thirds
        for idx in 0..3 {
            let (s, e) = space.part_range(idx, 3).unwrap();
            assert_eq!(e - s, 81);
        }
        assert!(space.part_range(3, 3).is_err());
    }

    #[test]
    fn scaling_invariance_exhaustive() {
        // gcd degree invariant under form i ↦ ζ^{λ_i}·form i, all ζ ∈ F_q^*
        let f3 = f(3);
        let w = WeightVector::new(vec![1, 2]).unwrap();
        let space = TupleSpace::new(&f3, &w, 1);
        let arith = SpecRanks(&f3);
        space.for_each_in_range(0, space.card, |coeffs| {
            let base = gcd_degree_ranks(&arith, &space.degrees, coeffs);
            for zr in 1..3u16 {
                let mut scaled = coeffs.to_vec();
                let mut off = 0;
                for (i, &d) in space.degrees.iter().enumerate() {
                    let mut factor = 1u16;
                    for _ in 0..w.lambdas()[i] {
                        factor = arith.mul(factor, zr);
                    }
                    for c in scaled[off..off + d + 1].iter_mut() {
                        *c = arith.mul(*c, factor);
                    }
                    off += d + 1;
                }
                assert_eq!(gcd_degree_ranks(&arith, &space.degrees, &scaled), base);
            }
        });
    }

    #[test]
    fn chart_swap_invariance_exhaustive() {
        // basepoint-freeness invariant under (x, y) ↦ (y, x)
        let f3 = f(3);
        let w = WeightVector::new(vec![1, 2]).unwrap();
        let space = TupleSpace::new(&f3, &w, 1);
        let arith = SpecRanks(&f3);
        space.for_each_in_range(0, space.card, |coeffs| {
            let mut swapped = coeffs.to_vec();
            let mut off = 0;
            for &d in &space.degrees {
                swapped[off..off + d + 1].reverse();
                off += d + 1;
            }
            assert_eq!(
                is_basepoint_free_ranks(&arith, &space.degrees, coeffs),
                is_basepoint_free_ranks(&arith, &space.degrees, &swapped)
            );
        });
    }

    #[test]
    fn gcd_bounded_by_min_degree() {
        let f5 = f(5);
        // all pairs of forms of degrees 2 and 3 over F_5 would be large;
        // sample the full degree-(1,2) space instead
        let w = WeightVector::new(vec![1, 2]).unwrap();
        let space = TupleSpace::new(&f5, &w, 1);
        let arith = SpecRanks(&f5);
        space.for_each_in_range(0, space.card, |coeffs| {
            match gcd_degree_ranks(&arith, &space.degrees, coeffs) {
                GcdDegree::Infinite => {}
                GcdDegree::Finite(g) => {
                    // bounded by min degree of the nonzero members
                    let mut min_d = usize::MAX;
                    let mut off = 0;
                    for &d in &space.degrees {
                        if coeffs[off..off + d + 1].iter().any(|&c| c != 0) {
                            min_d = min_d.min(d);
                        }
                        off += d + 1;
                    }
                    assert!(g <= min_d);
                }
            }
        });
    }

    #[test]
    fn table_and_spec_paths_agree() {
        let f4 = f(4);
        let table = FieldTable::new(&f4);
        let spec_arith = SpecRanks(&f4);
        let w = WeightVector::new(vec![1, 1]).unwrap();
        let space = TupleSpace::new(&f4, &w, 1);
        space.for_each_in_range(0, space.card, |coeffs| {
            assert_eq!(
                gcd_degree_ranks(&table, &space.degrees, coeffs),
                gcd_degree_ranks(&spec_arith, &space.degrees, coeffs)
            );
        });
    }

    #[test]
    fn weight_vector_derived() {
        let w = WeightVector::new(vec![2, 3, 4]).unwrap();
        assert_eq!(w.big_n(), 2);
        assert_eq!(w.total(), 9);
        assert_eq!(w.lcm(), 12);
        assert_eq!(w.gcd(), 1);
        assert_eq!(w.etas(), vec![6, 4, 3]);
        assert_eq!(w.restrict_divisible(2), vec![2, 4]);
        assert!(WeightVector::new(vec![]).is_err());
        assert!(WeightVector::new(vec![1, 0]).is_err());
    }
}
