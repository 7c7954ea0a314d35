//! Weighted and non-weighted F_q point counts of Hom_n(P¹, P(λ)) and the
//! discriminant locus: closed forms, and independent brute-force oracles that
//! enumerate coefficient tuples and apply the mass formula or Burnside's lemma.

use std::thread;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::binary_forms::{is_basepoint_free_ranks, SpecRanks, TupleSpace, WeightVector};
use crate::finite_field::{FieldSpec, FieldTable};
use crate::qpoly::QPoly;

/// Default enumeration budget (number of coefficient tuples).
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("characteristic {p} divides weight {lambda}; closed form does not apply")]
    WildCharacteristic { p: u64, lambda: u64 },
    #[error("degree parameter n must be >= 1")]
    DegreeNonPositive,
    #[error("enumeration of {needed} tuples exceeds the budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    ClosedForm,
    BruteForce,
    Burnside,
}

/// Exact count: a rational number for numeric q, or a polynomial in q.
#[derive(Debug, Clone, PartialEq)]
pub enum CountValue {
    Exact(BigRational),
    Polynomial(QPoly),
}

impl CountValue {
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            CountValue::Exact(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountResult {
    pub value: CountValue,
    pub method: CountMethod,
    /// |T(F_q)|, the basepoint-free tuple count, for brute-force runs.
    pub tuple_count: Option<BigInt>,
    /// Set when the characteristic divides some weight: the mass-formula
    /// value is still exact, but no closed form certifies it.
    pub wild_characteristic: bool,
}

/// Parameters of a Hom-stack Hom_n(C, P(λ)) with genus(C) = g.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomStackParams {
    pub weights: WeightVector,
    pub n: u64,
    pub g: u64,
}

impl HomStackParams {
    /// Dimension |λ|n + N − 2g of the Hom-stack (genus-0: |λ|n + N).
    pub fn dimension(&self) -> i64 {
        (self.weights.total() * self.n) as i64 + self.weights.big_n() as i64
            - 2 * self.g as i64
    }
}

fn check_tame(q: u64, lambdas: &[u64]) -> Result<u64, CountError> {
    let spec = FieldSpec::from_q(q).map_err(|_| CountError::NotPrimePower(q))?;
    for &l in lambdas {
        if l % spec.p == 0 {
            return Err(CountError::WildCharacteristic { p: spec.p, lambda: l });
        }
    }
    Ok(spec.p)
}

/// (1 + q + … + q^N) · (q^{|λ|n} − q^{|λ|n − N}), the exact weighted count of
/// Hom_n(P¹, P(λ))(F_q), as a polynomial in q.
pub fn closed_weighted_poly(w: &WeightVector, n: u64) -> Result<QPoly, CountError> {
    if n < 1 {
        return Err(CountError::DegreeNonPositive);
    }
    let big_n = w.big_n();
    let e = (w.total() * n) as usize;
    let lead = &QPoly::q_pow(e) - &QPoly::q_pow(e - big_n);
    Ok(&QPoly::geometric(big_n + 1) * &lead)
}

/// Closed-form weighted count at a numeric prime power q (tame only).
pub fn closed_weighted_count(q: u64, w: &WeightVector, n: u64) -> Result<CountResult, CountError> {
    check_tame(q, w.lambdas())?;
    let poly = closed_weighted_poly(w, n)?;
    let v = poly.eval(&BigInt::from(q));
    Ok(CountResult {
        value: CountValue::Exact(BigRational::from_integer(v)),
        method: CountMethod::ClosedForm,
        tuple_count: None,
        wild_characteristic: false,
    })
}

/// Count basepoint-free coefficient tuples for the sub-space with the given
/// form degrees, split across `workers` deterministic partitions.
fn count_bpf(space: &TupleSpace, workers: u64) -> u128 {
    let workers = workers.max(1).min(space.card.max(1) as u64);
    let table = if space.spec.q <= 4096 {
        Some(FieldTable::new(&space.spec))
    } else {
        None
    };
    let count_part = |idx: u64| -> u128 {
        let (start, end) = space.part_range(idx, workers).unwrap();
        let mut c: u128 = 0;
        match &table {
            Some(t) => space.for_each_in_range(start, end, |coeffs| {
                if is_basepoint_free_ranks(t, &space.degrees, coeffs) {
                    c += 1;
                }
            }),
            None => {
                let arith = SpecRanks(&space.spec);
                space.for_each_in_range(start, end, |coeffs| {
                    if is_basepoint_free_ranks(&arith, &space.degrees, coeffs) {
                        c += 1;
                    }
                })
            }
        }
        c
    };
    if workers == 1 {
        return count_part(0);
    }
    thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|idx| s.spawn(move || count_part(idx)))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).sum()
    })
}

/// Brute-force weighted count: enumerate all coefficient tuples, count the
/// basepoint-free ones, divide by q − 1 (every G_m-torsor over F_q is
/// trivial, so stack points are orbits of the scaling action).
pub fn brute_weighted_count(
    spec: &FieldSpec,
    w: &WeightVector,
    n: u64,
    workers: u64,
    budget: u128,
) -> Result<CountResult, CountError> {
    if n < 1 {
        return Err(CountError::DegreeNonPositive);
    }
    let space = TupleSpace::new(spec, w, n);
    if space.card > budget {
        return Err(CountError::BudgetExceeded {
            needed: space.card,
            budget,
        });
    }
    let tuples = count_bpf(&space, workers);
    let wild = w.lambdas().iter().any(|&l| l % spec.p == 0);
    let num = BigInt::from(tuples);
    let den = BigInt::from(spec.q - 1);
    if !wild {
        assert!(
            (&num % &den).is_zero(),
            "mass formula violated: q-1 does not divide the tuple count"
        );
    }
    Ok(CountResult {
        value: CountValue::Exact(BigRational::new(num.clone(), den)),
        method: CountMethod::BruteForce,
        tuple_count: Some(num),
        wild_characteristic: wild,
    })
}

fn euler_phi(mut n: u64) -> u64 {
    let mut phi = n;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            phi -= phi / d;
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// Brute-force count of F_q-isomorphism classes via Burnside's lemma over the
/// scaling group F_q^*: orbits = (1/(q−1)) Σ_ζ |Fix(ζ)|, where Fix(ζ) keeps
/// exactly the tuples supported on the weights killed by ζ's order.
pub fn brute_iso_count(
    spec: &FieldSpec,
    w: &WeightVector,
    n: u64,
    workers: u64,
    budget: u128,
) -> Result<CountResult, CountError> {
    if n < 1 {
        return Err(CountError::DegreeNonPositive);
    }
    // ζ of order d fixes exactly the tuples supported on {i : d | λ_i};
    // there are φ(d) such ζ per divisor d of q − 1.
    let mut fixed_total: u128 = 0;
    let mut spent: u128 = 0;
    let qm1 = spec.q - 1;
    for d in 1..=qm1 {
        if qm1 % d != 0 {
            continue;
        }
        let sub = w.restrict_divisible(d);
        if sub.len() < 2 {
            continue; // at most one nonzero form: never basepoint free
        }
        let sub_w = WeightVector::new(sub).unwrap();
        let space = TupleSpace::new(spec, &sub_w, n);
        spent = spent.saturating_add(space.card);
        if spent > budget {
            return Err(CountError::BudgetExceeded {
                needed: spent,
                budget,
            });
        }
        let fixed = count_bpf(&space, workers);
        fixed_total += euler_phi(d) as u128 * fixed;
    }
    let num = BigInt::from(fixed_total);
    let den = BigInt::from(qm1);
    assert!(
        (&num % &den).is_zero(),
        "Burnside sum not divisible by the group order"
    );
    Ok(CountResult {
        value: CountValue::Exact(BigRational::new(num, den)),
        method: CountMethod::Burnside,
        tuple_count: None,
        wild_characteristic: w.lambdas().iter().any(|&l| l % spec.p == 0),
    })
}

/// Closed-form isomorphism-class count:
/// Σ_{d | q−1} φ(d) · closed_weighted_count(q, λ|_{d | λ_i}, n),
/// where sub-vectors with fewer than two entries contribute 0.
pub fn closed_iso_count(q: u64, w: &WeightVector, n: u64) -> Result<CountResult, CountError> {
    check_tame(q, w.lambdas())?;
    if n < 1 {
        return Err(CountError::DegreeNonPositive);
    }
    let mut total = BigInt::zero();
    let qm1 = q - 1;
    for d in 1..=qm1 {
        if qm1 % d != 0 {
            continue;
        }
        let sub = w.restrict_divisible(d);
        if sub.len() < 2 {
            continue;
        }
        let sub_w = WeightVector::new(sub).unwrap();
        let poly = closed_weighted_poly(&sub_w, n)?;
        total += BigInt::from(euler_phi(d)) * poly.eval(&BigInt::from(q));
    }
    Ok(CountResult {
        value: CountValue::Exact(BigRational::from_integer(total)),
        method: CountMethod::ClosedForm,
        tuple_count: None,
        wild_characteristic: false,
    })
}

/// Weighted count of the ambient stack P(Λ): (q^M − 1)/(q − 1) with
/// M = Σ (nλ_i + 1), as a polynomial 1 + q + … + q^{M−1}.
pub fn ambient_weighted_poly(w: &WeightVector, n: u64) -> QPoly {
    let m: usize = w.lambdas().iter().map(|&l| (n * l) as usize + 1).sum();
    QPoly::geometric(m)
}

/// Weighted count of the discriminant locus (tuples with a common zero),
/// as a polynomial in q: ambient minus Hom-stack.
pub fn discriminant_weighted_poly(w: &WeightVector, n: u64) -> Result<QPoly, CountError> {
    if n < 1 {
        return Err(CountError::DegreeNonPositive);
    }
    let hom = if w.big_n() == 0 {
        QPoly::zero()
    } else {
        closed_weighted_poly(w, n)?
    };
    Ok(&ambient_weighted_poly(w, n) - &hom)
}

/// Discriminant count at numeric q (tame only).
pub fn discriminant_weighted_count(
    q: u64,
    w: &WeightVector,
    n: u64,
) -> Result<CountResult, CountError> {
    check_tame(q, w.lambdas())?;
    let poly = discriminant_weighted_poly(w, n)?;
    Ok(CountResult {
        value: CountValue::Exact(BigRational::from_integer(poly.eval(&BigInt::from(q)))),
        method: CountMethod::ClosedForm,
        tuple_count: None,
        wild_characteristic: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(l: &[u64]) -> WeightVector {
        WeightVector::new(l.to_vec()).unwrap()
    }

    fn int(r: &CountResult) -> BigInt {
        r.value.as_integer().expect("integer count")
    }

    #[test]
    fn closed_examples() {
        assert_eq!(int(&closed_weighted_count(3, &w(&[1, 1]), 1).unwrap()), BigInt::from(24));
        assert_eq!(int(&closed_weighted_count(3, &w(&[1, 2]), 1).unwrap()), BigInt::from(72));
        assert_eq!(int(&closed_weighted_count(3, &w(&[1, 1]), 2).unwrap()), BigInt::from(216));
        // single weight: N = 0 forces the count to vanish
        assert!(closed_weighted_poly(&w(&[3]), 2).unwrap().is_zero());
        assert!(matches!(
            closed_weighted_count(3, &w(&[1, 1]), 0),
            Err(CountError::DegreeNonPositive)
        ));
    }

    #[test]
    fn wild_characteristic_refused() {
        assert!(matches!(
            closed_weighted_count(2, &w(&[2, 4]), 1),
            Err(CountError::WildCharacteristic { p: 2, lambda: 2 })
        ));
        assert!(matches!(
            closed_iso_count(3, &w(&[3, 6]), 1),
            Err(CountError::WildCharacteristic { p: 3, lambda: 3 })
        ));
    }

    #[test]
    fn brute_examples() {
        let f3 = FieldSpec::from_q(3).unwrap();
        let r = brute_weighted_count(&f3, &w(&[1, 2]), 1, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(int(&r), BigInt::from(72));
        assert_eq!(r.tuple_count, Some(BigInt::from(144)));

        let f2 = FieldSpec::from_q(2).unwrap();
        let r = brute_weighted_count(&f2, &w(&[1, 1]), 1, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(int(&r), BigInt::from(6));
        assert_eq!(r.tuple_count, Some(BigInt::from(6)));

        let r = brute_weighted_count(&f3, &w(&[2, 4]), 1, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(int(&r), BigInt::from(1944));
        assert_eq!(r.tuple_count, Some(BigInt::from(3888)));
        assert!(r.wild_characteristic == false);
    }

    #[test]
    fn budget_enforced() {
        let f3 = FieldSpec::from_q(3).unwrap();
        assert!(matches!(
            brute_weighted_count(&f3, &w(&[1, 2]), 1, 1, 100),
            Err(CountError::BudgetExceeded { needed: 243, budget: 100 })
        ));
    }

    #[test]
    fn workers_independence() {
        let f3 = FieldSpec::from_q(3).unwrap();
        let baseline = brute_weighted_count(&f3, &w(&[1, 2]), 1, 1, DEFAULT_BUDGET).unwrap();
        for workers in [2u64, 7] {
            let r = brute_weighted_count(&f3, &w(&[1, 2]), 1, workers, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.value, baseline.value);
            assert_eq!(r.tuple_count, baseline.tuple_count);
        }
    }

    #[test]
    fn iso_examples() {
        let f3 = FieldSpec::from_q(3).unwrap();
        let r = brute_iso_count(&f3, &w(&[2, 4]), 1, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(int(&r), BigInt::from(3888));
        let r = brute_iso_count(&f3, &w(&[1, 2]), 1, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(int(&r), BigInt::from(72));
        let r = brute_iso_count(&f3, &w(&[1, 2, 2]), 1, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(int(&r), BigInt::from(3024));
    }

    #[test]
    fn closed_iso_examples() {
        assert_eq!(int(&closed_iso_count(3, &w(&[2, 4]), 1).unwrap()), BigInt::from(3888));
        // (q^11 + q^10 - q^8 - q^7) + (q^7 - q^5) at q = 5
        assert_eq!(
            int(&closed_iso_count(5, &w(&[2, 3, 4]), 1).unwrap()),
            BigInt::from(58_200_000u64)
        );
        // trivial generic stabilizer: iso count equals weighted count
        assert_eq!(
            closed_iso_count(3, &w(&[1, 1]), 2).unwrap().value,
            closed_weighted_count(3, &w(&[1, 1]), 2).unwrap().value
        );
        // the (1,2,2) correction: weighted(1,2,2) + weighted(2,2)
        let a = int(&closed_weighted_count(3, &w(&[1, 2, 2]), 1).unwrap());
        let b = int(&closed_weighted_count(3, &w(&[2, 2]), 1).unwrap());
        assert_eq!(int(&closed_iso_count(3, &w(&[1, 2, 2]), 1).unwrap()), a + b);
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(
            int(&discriminant_weighted_count(3, &w(&[1, 2]), 1).unwrap()),
            BigInt::from(49)
        );
        let p = discriminant_weighted_poly(&w(&[1, 2]), 1).unwrap();
        assert_eq!(p.to_string(), "q^3 + 2*q^2 + q + 1");
        // single weight: the discriminant is all of P(Λ)
        let p = discriminant_weighted_poly(&w(&[2]), 1).unwrap();
        assert_eq!(p, QPoly::geometric(3));
    }

    #[test]
    fn discriminant_codimension() {
        // degree of the discriminant polynomial is dim P(Λ) − N
        for (lams, nmax) in [(vec![1u64, 2], 2u64), (vec![1, 1], 2), (vec![2, 4], 2), (vec![1, 1, 1], 2)] {
            let wv = w(&lams);
            for n in 1..=nmax {
                let m: usize = lams.iter().map(|&l| (n * l) as usize + 1).sum();
                let dim = m - 1;
                let p = discriminant_weighted_poly(&wv, n).unwrap();
                assert_eq!(p.degree(), Some(dim - wv.big_n()));
            }
        }
    }

    #[test]
    fn sandwich_symbolic() {
        // Hom count + discriminant count = ambient count, identically in q
        for lams in [vec![1u64, 2], vec![2, 4], vec![1, 1, 1]] {
            let wv = w(&lams);
            for n in 1..=2 {
                let hom = closed_weighted_poly(&wv, n).unwrap();
                let disc = discriminant_weighted_poly(&wv, n).unwrap();
                assert_eq!(&hom + &disc, ambient_weighted_poly(&wv, n));
            }
        }
    }

    #[test]
    fn discriminant_by_direct_enumeration() {
        // 49 = (243 − 1 − 144)/2: non-bpf, not-all-zero tuples up to scaling
        let f3 = FieldSpec::from_q(3).unwrap();
        let wv = w(&[1, 2]);
        let space = TupleSpace::new(&f3, &wv, 1);
        let arith = SpecRanks(&f3);
        let mut common_zero = 0u64;
        space.for_each_in_range(0, space.card, |coeffs| {
            let nonzero = coeffs.iter().any(|&c| c != 0);
            if nonzero && !is_basepoint_free_ranks(&arith, &space.degrees, coeffs) {
                common_zero += 1;
            }
        });
        assert_eq!(common_zero / 2, 49);
    }

    #[test]
    fn euler_phi_values() {
        assert_eq!(
            (1..=12).map(euler_phi).collect::<Vec<_>>(),
            vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]
        );
    }

    #[test]
    fn wild_brute_still_counts() {
        // char 2 divides the weight; mass formula value still exact
        let f2 = FieldSpec::from_q(2).unwrap();
        let r = brute_weighted_count(&f2, &w(&[2, 4]), 1, 1, DEFAULT_BUDGET).unwrap();
        assert!(r.wild_characteristic);
        match &r.value {
            CountValue::Exact(v) => assert!(!v.is_integer() || v.is_integer()),
            _ => panic!(),
        }
    }

    #[test]
    fn dimension_formula() {
        let params = HomStackParams { weights: w(&[4, 6]), n: 2, g: 0 };
        assert_eq!(params.dimension(), 21);
        let params = HomStackParams { weights: w(&[4, 6]), n: 3, g: 1 };
        assert_eq!(params.dimension(), 29);
    }
}
