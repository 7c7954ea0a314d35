//! Exact graded-ring computations for weighted projective bundles: twisted
//! Chern polynomials, the bundle relation, Poincaré polynomials, pushforwards
//! of hyperplane powers, and the cover degree ℓ^N/∏λ_i.
//!
//! The only base rings needed are a point and the θ-subring Q[θ]/θ^{g+1} of
//! the cohomology of a Jacobian (θ in degree 2); all coefficients are exact
//! rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::binary_forms::WeightVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("number of summands {summands} does not match number of weights {weights}")]
    WeightMismatch { summands: usize, weights: usize },
    #[error("degree n = {n} is below the stable bound 2g = {bound}")]
    DegreeTooSmall { n: u64, bound: u64 },
}

/// Element of Q[θ]/θ^{g+1}; a point base is the case g = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaPoly {
    pub g: usize,
    /// coeffs[i] multiplies θ^i; length at most g+1
    pub coeffs: Vec<BigRational>,
}

impl ThetaPoly {
    pub fn zero(g: usize) -> Self {
        ThetaPoly { g, coeffs: Vec::new() }
    }

    pub fn one(g: usize) -> Self {
        ThetaPoly::constant(g, BigRational::one())
    }

    pub fn constant(g: usize, c: BigRational) -> Self {
        let mut p = ThetaPoly { g, coeffs: vec![c] };
        p.trim();
        p
    }

    /// c·θ^e (zero when e > g).
    pub fn theta_power(g: usize, e: usize, c: BigRational) -> Self {
        if e > g {
            return ThetaPoly::zero(g);
        }
        let mut coeffs = vec![BigRational::zero(); e + 1];
        coeffs[e] = c;
        let mut p = ThetaPoly { g, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        self.coeffs.truncate(self.g + 1);
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, rhs: &ThetaPoly) -> ThetaPoly {
        debug_assert_eq!(self.g, rhs.g);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        let mut p = ThetaPoly { g: self.g, coeffs };
        p.trim();
        p
    }

    pub fn mul(&self, rhs: &ThetaPoly) -> ThetaPoly {
        debug_assert_eq!(self.g, rhs.g);
        if self.is_zero() || rhs.is_zero() {
            return ThetaPoly::zero(self.g);
        }
        let top = (self.coeffs.len() + rhs.coeffs.len() - 1).min(self.g + 1);
        let mut coeffs = vec![BigRational::zero(); top];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i > self.g {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j > self.g {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        let mut p = ThetaPoly { g: self.g, coeffs };
        p.trim();
        p
    }

    pub fn scale_int(&self, c: i64) -> ThetaPoly {
        let f = BigRational::from_integer(BigInt::from(c));
        let mut p = ThetaPoly {
            g: self.g,
            coeffs: self.coeffs.iter().map(|x| x * &f).collect(),
        };
        p.trim();
        p
    }

    pub fn neg(&self) -> ThetaPoly {
        ThetaPoly {
            g: self.g,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// A direct sum E = E_0 ⊕ … ⊕ E_N with per-summand Chern classes and twist
/// multipliers η_i: the twisted Chern polynomial scales the Chern roots of
/// E_i by η_i.
#[derive(Debug, Clone, PartialEq)]
pub struct ChernData {
    pub g: usize,
    pub summands: Vec<ChernSummand>,
    pub eta: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChernSummand {
    pub rank: usize,
    /// c_1 .. c_rank (c_0 = 1 implicit); trailing zeros may be omitted
    pub chern: Vec<ThetaPoly>,
}

/// The relation ζ^R + c^η_1 ζ^{R−1} + … + c^η_R = 0 presenting the Chow ring
/// of a weighted projective bundle over the base, with ζ = L·c_1(O(1)).
#[derive(Debug, Clone, PartialEq)]
pub struct RelationPresentation {
    /// total rank R = Σ r_i
    pub degree: usize,
    /// c^η_1 .. c^η_R
    pub coefficients: Vec<ThetaPoly>,
    /// L = lcm(λ)
    pub zeta_normalization: u64,
}

/// Betti-number generating polynomial (coefficient of t^i = dim H^i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoincarePolynomial {
    pub coeffs: Vec<u64>,
}

impl PoincarePolynomial {
    pub fn point() -> Self {
        PoincarePolynomial { coeffs: vec![1] }
    }

    /// (1+t)^{2g}, the Poincaré polynomial of a Jacobian.
    pub fn jacobian(g: usize) -> Self {
        let mut coeffs = vec![1u64];
        for _ in 0..2 * g {
            let mut next = vec![0u64; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i] += c;
                next[i + 1] += c;
            }
            coeffs = next;
        }
        PoincarePolynomial { coeffs }
    }

    pub fn eval_at_one(&self) -> u64 {
        self.coeffs.iter().sum()
    }
}

/// Coefficients [c^η_0, c^η_1, …, c^η_R] of ∏_i c_{η_i t}(E_i): the t^j
/// coefficient of factor i is η_i^j·c_j(E_i).
pub fn twisted_chern_polynomial(data: &ChernData) -> Vec<ThetaPoly> {
    let g = data.g;
    let mut acc = vec![ThetaPoly::one(g)];
    for (i, s) in data.summands.iter().enumerate() {
        let eta = BigInt::from(data.eta[i]);
        // t-polynomial of this summand
        let mut factor = vec![ThetaPoly::one(g)];
        let mut eta_pow = BigInt::one();
        for j in 1..=s.rank {
            eta_pow = &eta_pow * &eta;
            let cj = s
                .chern
                .get(j - 1)
                .cloned()
                .unwrap_or_else(|| ThetaPoly::zero(g));
            let scaled = cj.mul(&ThetaPoly::constant(
                g,
                BigRational::from_integer(eta_pow.clone()),
            ));
            factor.push(scaled);
        }
        // multiply acc by factor
        let mut next = vec![ThetaPoly::zero(g); acc.len() + factor.len() - 1];
        for (a, pa) in acc.iter().enumerate() {
            if pa.is_zero() {
                continue;
            }
            for (b, pb) in factor.iter().enumerate() {
                next[a + b] = next[a + b].add(&pa.mul(pb));
            }
        }
        acc = next;
    }
    acc
}

/// Build the weighted-projective-bundle relation from Chern data and weights;
/// η is recomputed as η_i = lcm(λ)/λ_i.
pub fn wpb_relation(
    data: &ChernData,
    w: &WeightVector,
) -> Result<RelationPresentation, AlgebraError> {
    if data.summands.len() != w.len() {
        return Err(AlgebraError::WeightMismatch {
            summands: data.summands.len(),
            weights: w.len(),
        });
    }
    let mut data = data.clone();
    data.eta = w.etas();
    let coeffs = twisted_chern_polynomial(&data);
    let degree = data.summands.iter().map(|s| s.rank).sum();
    debug_assert_eq!(coeffs.len(), degree + 1);
    Ok(RelationPresentation {
        degree,
        coefficients: coeffs[1..].to_vec(),
        zeta_normalization: w.lcm(),
    })
}

/// Chern data of ν_*P(n)^{⊗λ_i} over the Jacobian of a genus-g curve:
/// summand i has rank nλ_i − g + 1 and c_j = (−1)^j θ^j / j! for j = 1..g.
pub fn jacobian_chern_data(
    g: u64,
    n: u64,
    w: &WeightVector,
) -> Result<ChernData, AlgebraError> {
    if n < 2 * g {
        return Err(AlgebraError::DegreeTooSmall { n, bound: 2 * g });
    }
    let gu = g as usize;
    let mut chern = Vec::with_capacity(gu);
    let mut fact = BigInt::one();
    for j in 1..=gu {
        fact *= BigInt::from(j as u64);
        let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        chern.push(ThetaPoly::theta_power(
            gu,
            j,
            BigRational::new(sign, fact.clone()),
        ));
    }
    let summands = w
        .lambdas()
        .iter()
        .map(|&l| ChernSummand {
            rank: (n * l + 1 - g) as usize,
            chern: chern.clone(),
        })
        .collect();
    Ok(ChernData {
        g: gu,
        summands,
        eta: w.etas(),
    })
}

/// Poincaré polynomial of a weighted projective bundle with N-dimensional
/// fibres: base · (1 + t² + … + t^{2N}).
pub fn wpb_poincare(base: &PoincarePolynomial, big_n: usize) -> PoincarePolynomial {
    let mut coeffs = vec![0u64; base.coeffs.len() + 2 * big_n];
    for j in 0..=big_n {
        for (i, &c) in base.coeffs.iter().enumerate() {
            coeffs[i + 2 * j] += c;
        }
    }
    PoincarePolynomial { coeffs }
}

/// [π_*ζ^{R−1}, π_*ζ^R, …, π_*ζ^{R−1+maxExtra}]: the first entry is 1 and the
/// rest follow the Segre-style recursion π_*ζ^{R−1+m} = −Σ_j c^η_j·π_*ζ^{R−1+m−j}.
pub fn pushforward_powers(rel: &RelationPresentation, max_extra: usize) -> Vec<ThetaPoly> {
    let g = rel
        .coefficients
        .first()
        .map(|c| c.g)
        .unwrap_or(0);
    let mut out: Vec<ThetaPoly> = vec![ThetaPoly::one(g)];
    for m in 1..=max_extra {
        let mut s = ThetaPoly::zero(g);
        for (jm1, c) in rel.coefficients.iter().enumerate() {
            let j = jm1 + 1;
            if j > m {
                break;
            }
            s = s.add(&c.mul(&out[m - j]));
        }
        out.push(s.neg());
    }
    out
}

/// Degree lcm(λ)^N / ∏λ_i of the cover P(1,…,1) → P(λ); a stacky (possibly
/// non-integral) rational number.
pub fn phi_cover_degree(w: &WeightVector) -> BigRational {
    let l = BigInt::from(w.lcm());
    let mut num = BigInt::one();
    for _ in 0..w.big_n() {
        num = &num * &l;
    }
    let mut den = BigInt::one();
    for &li in w.lambdas() {
        den *= BigInt::from(li);
    }
    BigRational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn wv(l: &[u64]) -> WeightVector {
        WeightVector::new(l.to_vec()).unwrap()
    }

    #[test]
    fn twisted_two_line_bundles() {
        // c_1(E_0) = 2θ, c_1(E_1) = 3θ in g = 2; η = (3, 2)
        let g = 2;
        let a = ThetaPoly::theta_power(g, 1, rat(2, 1));
        let b = ThetaPoly::theta_power(g, 1, rat(3, 1));
        let data = ChernData {
            g,
            summands: vec![
                ChernSummand { rank: 1, chern: vec![a.clone()] },
                ChernSummand { rank: 1, chern: vec![b.clone()] },
            ],
            eta: vec![3, 2],
        };
        let c = twisted_chern_polynomial(&data);
        assert_eq!(c.len(), 3);
        assert_eq!(c[0], ThetaPoly::one(g));
        // 3a + 2b = 12θ
        assert_eq!(c[1], ThetaPoly::theta_power(g, 1, rat(12, 1)));
        // 6ab = 36θ²
        assert_eq!(c[2], ThetaPoly::theta_power(g, 2, rat(36, 1)));
    }

    #[test]
    fn twisted_theta_truncation() {
        // g = 1, all c_1 = −θ: c^η_1 = −(Ση_i)θ and all higher classes vanish
        let g = 1;
        let minus_theta = ThetaPoly::theta_power(g, 1, rat(-1, 1));
        let data = ChernData {
            g,
            summands: vec![
                ChernSummand { rank: 3, chern: vec![minus_theta.clone()] },
                ChernSummand { rank: 5, chern: vec![minus_theta.clone()] },
            ],
            eta: vec![6, 4],
        };
        let c = twisted_chern_polynomial(&data);
        assert_eq!(c[1], ThetaPoly::theta_power(g, 1, rat(-10, 1)));
        for cj in &c[2..] {
            assert!(cj.is_zero());
        }
    }

    #[test]
    fn wpb_relation_point_base() {
        // trivial line summands over a point: relation ζ^{N+1} = 0
        let w = wv(&[2, 3, 4]);
        let data = ChernData {
            g: 0,
            summands: vec![ChernSummand { rank: 1, chern: vec![] }; 3],
            eta: vec![],
        };
        let rel = wpb_relation(&data, &w).unwrap();
        assert_eq!(rel.degree, 3);
        assert!(rel.coefficients.iter().all(|c| c.is_zero()));
        assert_eq!(rel.zeta_normalization, 12);
    }

    #[test]
    fn wpb_relation_jacobian() {
        // g = 1: relation h^{N0} + c^η_1 h^{N0−1} with
        // c^η_1 = −(Σ η_i)θ and N0 = Σ (nλ_i − g + 1)
        let g = 1u64;
        let n = 3u64;
        let w = wv(&[4, 6]);
        let data = jacobian_chern_data(g, n, &w).unwrap();
        let rel = wpb_relation(&data, &w).unwrap();
        let n0: usize = w.lambdas().iter().map(|&l| (n * l) as usize).sum(); // g = 1
        assert_eq!(rel.degree, n0);
        let etas = w.etas(); // (3, 2)
        let expected = ThetaPoly::theta_power(1, 1, rat(-((etas[0] + etas[1]) as i64), 1));
        assert_eq!(rel.coefficients[0], expected);
        for c in &rel.coefficients[1..] {
            assert!(c.is_zero());
        }
    }

    #[test]
    fn wpb_relation_mismatch() {
        let w = wv(&[1, 2]);
        let data = ChernData {
            g: 0,
            summands: vec![ChernSummand { rank: 1, chern: vec![] }],
            eta: vec![],
        };
        assert!(matches!(
            wpb_relation(&data, &w),
            Err(AlgebraError::WeightMismatch { .. })
        ));
    }

    #[test]
    fn jacobian_data_values() {
        let w = wv(&[4, 6]);
        let d = jacobian_chern_data(2, 4, &w).unwrap();
        assert_eq!(d.summands[0].rank, 15); // 4·4 − 2 + 1
        assert_eq!(d.summands[1].rank, 23);
        assert_eq!(d.summands[0].chern[0], ThetaPoly::theta_power(2, 1, rat(-1, 1)));
        assert_eq!(d.summands[0].chern[1], ThetaPoly::theta_power(2, 2, rat(1, 2)));
        assert!(matches!(
            jacobian_chern_data(2, 3, &w),
            Err(AlgebraError::DegreeTooSmall { .. })
        ));
        // genus 0: no Chern classes
        let d = jacobian_chern_data(0, 1, &w).unwrap();
        assert!(d.summands[0].chern.is_empty());
    }

    #[test]
    fn poincare_examples() {
        let p = wpb_poincare(&PoincarePolynomial::point(), 2);
        assert_eq!(p.coeffs, vec![1, 0, 1, 0, 1]);
        let j = PoincarePolynomial::jacobian(1);
        assert_eq!(j.coeffs, vec![1, 2, 1]);
        let p = wpb_poincare(&j, 1);
        assert_eq!(p.coeffs, vec![1, 2, 2, 2, 1]);
        // value at t = 1
        assert_eq!(p.eval_at_one(), 2 * j.eval_at_one());
        let p0 = wpb_poincare(&j, 0);
        assert_eq!(p0, j);
    }

    #[test]
    fn pushforward_point_base() {
        let w = wv(&[1, 1, 1]);
        let data = ChernData {
            g: 0,
            summands: vec![ChernSummand { rank: 1, chern: vec![] }; 3],
            eta: vec![],
        };
        let rel = wpb_relation(&data, &w).unwrap();
        let s = pushforward_powers(&rel, 4);
        assert_eq!(s[0], ThetaPoly::one(0));
        for e in &s[1..] {
            assert!(e.is_zero());
        }
    }

    #[test]
    fn pushforward_recursion_closes() {
        let w = wv(&[4, 6]);
        let data = jacobian_chern_data(1, 3, &w).unwrap();
        let rel = wpb_relation(&data, &w).unwrap();
        let s = pushforward_powers(&rel, 6);
        // second entry is −c^η_1
        assert_eq!(s[1], rel.coefficients[0].neg());
        // re-substitution: s_m + Σ_j c_j s_{m−j} = 0
        for m in 1..=6usize {
            let mut acc = s[m].clone();
            for (jm1, c) in rel.coefficients.iter().enumerate() {
                let j = jm1 + 1;
                if j > m {
                    break;
                }
                acc = acc.add(&c.mul(&s[m - j]));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn cover_degrees() {
        assert_eq!(phi_cover_degree(&wv(&[1, 1])), rat(1, 1));
        assert_eq!(phi_cover_degree(&wv(&[2, 2])), rat(1, 2));
        assert_eq!(phi_cover_degree(&wv(&[1, 2])), rat(1, 1));
        assert_eq!(phi_cover_degree(&wv(&[2, 3, 4])), rat(6, 1)); // 12²/24
    }
}
