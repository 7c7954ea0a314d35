//! Grothendieck–Lefschetz trace evaluation from cohomology tables, the moduli
//! registry mapping level structures to weighted projective stacks,
//! Batyrev–Manin counting sums, the Shafarevich leading term, and Picard
//! groups of Hom-stacks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::binary_forms::WeightVector;
use crate::qpoly::QPoly;
use crate::spectral_sequence::CohomologyTable;
use crate::stack_count::{closed_iso_count, CountError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("table contains curve classes; an L-polynomial is required for numeric output")]
    MissingLPolynomial,
    #[error("L-polynomial genus {lpoly} does not match table genus {table}")]
    GenusMismatch { lpoly: u64, table: u64 },
    #[error("L-polynomial q {lpoly} does not match evaluation q {q}")]
    FieldMismatch { lpoly: u64, q: u64 },
    #[error("invalid L-polynomial: {0}")]
    BadLPolynomial(String),
    #[error("unknown moduli name {0:?}")]
    UnknownModuli(String),
    #[error(transparent)]
    Count(#[from] CountError),
}

/// Numerator of the zeta function of a curve C/F_q: degree 2g, constant
/// term 1, functional-equation symmetry a_{2g−i} = q^{g−i}·a_i. Its
/// reciprocal roots are the weight-1 Frobenius eigenvalues of C.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPolynomial {
    pub q: u64,
    /// a_0 = 1, a_1, …, a_{2g}
    pub coeffs: Vec<BigInt>,
}

impl LPolynomial {
    pub fn new(q: u64, coeffs: Vec<BigInt>) -> Result<Self, TraceError> {
        if coeffs.is_empty() || coeffs.len() % 2 == 0 {
            return Err(TraceError::BadLPolynomial(
                "coefficient list must have odd length 2g+1".into(),
            ));
        }
        if !coeffs[0].is_one() {
            return Err(TraceError::BadLPolynomial("constant term must be 1".into()));
        }
        let g = (coeffs.len() - 1) / 2;
        let qq = BigInt::from(q);
        for i in 0..=g {
            let mut expect = coeffs[i].clone();
            for _ in 0..(g - i) {
                expect *= &qq;
            }
            if coeffs[2 * g - i] != expect {
                return Err(TraceError::BadLPolynomial(format!(
                    "functional equation fails at index {i}"
                )));
            }
        }
        Ok(LPolynomial { q, coeffs })
    }

    pub fn genus(&self) -> u64 {
        ((self.coeffs.len() - 1) / 2) as u64
    }

    /// 1 − aT + qT² for an elliptic curve with trace of Frobenius a.
    pub fn elliptic(q: u64, a: i64) -> Result<Self, TraceError> {
        LPolynomial::new(q, vec![BigInt::one(), BigInt::from(-a), BigInt::from(q)])
    }

    /// Elementary symmetric functions e_0..e_{2g} of the reciprocal roots α_i
    /// (e_i = (−1)^i a_i).
    pub fn elementary(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let s = if i % 2 == 0 { a.clone() } else { -a };
                BigRational::from_integer(s)
            })
            .collect()
    }

    /// Elementary symmetric functions of the inverse roots 1/α_i:
    /// ē_i = e_{2g−i}/q^g.
    pub fn elementary_inverse(&self) -> Vec<BigRational> {
        let e = self.elementary();
        let g = self.genus() as usize;
        let mut qg = BigInt::one();
        for _ in 0..g {
            qg *= BigInt::from(self.q);
        }
        let qg = BigRational::from_integer(qg);
        (0..e.len()).map(|i| &e[e.len() - 1 - i] / &qg).collect()
    }

    /// Power sums p_1..p_max of the reciprocal roots, by Newton's identities.
    pub fn power_sums(&self, max: usize) -> Vec<BigRational> {
        newton_power_sums(&self.elementary(), max)
    }

    /// Power sums of the inverse roots 1/α_i.
    pub fn power_sums_inverse(&self, max: usize) -> Vec<BigRational> {
        newton_power_sums(&self.elementary_inverse(), max)
    }
}

/// p_1..p_max from elementary symmetric functions e_0..e_k (e_0 = 1):
/// p_m = Σ_{i=1}^{m−1} (−1)^{i−1} e_i p_{m−i} + (−1)^{m−1} m·e_m.
pub fn newton_power_sums(e: &[BigRational], max: usize) -> Vec<BigRational> {
    let get = |i: usize| e.get(i).cloned().unwrap_or_else(BigRational::zero);
    let mut p: Vec<BigRational> = Vec::with_capacity(max);
    for m in 1..=max {
        let mut s = BigRational::zero();
        for i in 1..m {
            let term = &get(i) * &p[m - i - 1];
            if i % 2 == 1 {
                s += term;
            } else {
                s -= term;
            }
        }
        let lead = get(m) * BigRational::from_integer(BigInt::from(m as u64));
        if m % 2 == 1 {
            s += lead;
        } else {
            s -= lead;
        }
        p.push(s);
    }
    p
}

/// Recover e_1..e_max from power sums (inverse Newton):
/// m·e_m = Σ_{i=1}^{m} (−1)^{i−1} e_{m−i} p_i.
pub fn newton_elementary(p: &[BigRational], max: usize) -> Vec<BigRational> {
    let mut e: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=max {
        let mut s = BigRational::zero();
        for i in 1..=m {
            let term = &e[m - i] * &p[i - 1];
            if i % 2 == 1 {
                s += term;
            } else {
                s -= term;
            }
        }
        e.push(s / BigRational::from_integer(BigInt::from(m as u64)));
    }
    e
}

/// Complete homogeneous sums h_0..h_max from elementary symmetric functions
/// (power-series inversion: Σ h_s t^s · Σ (−1)^i e_i t^i = 1).
pub fn complete_homogeneous(e: &[BigRational], max: usize) -> Vec<BigRational> {
    let get = |i: usize| e.get(i).cloned().unwrap_or_else(BigRational::zero);
    let mut h: Vec<BigRational> = vec![BigRational::one()];
    for s in 1..=max {
        let mut acc = BigRational::zero();
        for k in 1..=s {
            let term = &get(k) * &h[s - k];
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        h.push(acc);
    }
    h
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Weighted point count q^D·Σ_i (−1)^i tr(Frob^{−1} | H^i) from a cohomology
/// table at numeric q. Tables containing curve classes need the curve's
/// L-polynomial; curve eigenvalues are never approximated.
pub fn trace_count(
    table: &CohomologyTable,
    q: u64,
    lpoly: Option<&LPolynomial>,
) -> Result<BigRational, TraceError> {
    let has_curve = table
        .groups
        .iter()
        .flat_map(|g| g.classes.iter())
        .any(|c| {
            let (jac, sym, _, _) = c.parts();
            jac + sym > 0
        });
    let (ei, hs, g2) = if has_curve {
        let lp = lpoly.ok_or(TraceError::MissingLPolynomial)?;
        if lp.genus() != table.genus {
            return Err(TraceError::GenusMismatch {
                lpoly: lp.genus(),
                table: table.genus,
            });
        }
        if lp.q != q {
            return Err(TraceError::FieldMismatch { lpoly: lp.q, q });
        }
        let max_sym = table
            .groups
            .iter()
            .flat_map(|gr| gr.classes.iter())
            .map(|c| c.parts().1)
            .max()
            .unwrap_or(0) as usize;
        let e_inv = lp.elementary_inverse();
        let h = complete_homogeneous(&e_inv, max_sym);
        (e_inv, h, 2 * lp.genus())
    } else {
        (Vec::new(), Vec::new(), 0)
    };

    let qq = BigRational::from_integer(BigInt::from(q));
    let mut total = BigRational::zero();
    for grp in &table.groups {
        for c in &grp.classes {
            let (jac, sym, j, mult) = c.parts();
            // q^{-j}
            let mut qinvj = BigRational::one();
            for _ in 0..j {
                qinvj /= &qq;
            }
            let term = if jac + sym == 0 {
                BigRational::from_integer(BigInt::from(mult)) * qinvj
            } else {
                // the block of `mult` eigenvalue slots is `copies` copies of
                // ∧^jac H¹ ⊗ Sym^sym H¹; its Frob^{-1}-trace is e_jac·h_sym
                let block = binomial(g2, jac)
                    * if sym == 0 { 1 } else { binomial(g2 + sym - 1, sym) };
                debug_assert!(block > 0 && mult % block == 0);
                let copies = BigRational::from_integer(BigInt::from(mult / block));
                let e_term = ei
                    .get(jac as usize)
                    .cloned()
                    .unwrap_or_else(BigRational::zero);
                let h_term = hs
                    .get(sym as usize)
                    .cloned()
                    .unwrap_or_else(BigRational::zero);
                copies * e_term * h_term * qinvj
            };
            if grp.i % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
    }
    // multiply by q^D (D may be negative only for degenerate inputs)
    let mut qd = BigRational::one();
    for _ in 0..table.dimension.unsigned_abs() {
        qd *= &qq;
    }
    if table.dimension < 0 {
        qd = qd.recip();
    }
    Ok(total * qd)
}

/// Symbolic trace in q for Tate-only tables: q^D·Σ (−1)^i q^{−j} as an
/// integer polynomial (every exponent D − j must be nonnegative).
pub fn trace_poly(table: &CohomologyTable) -> Result<QPoly, TraceError> {
    let mut acc = QPoly::zero();
    for grp in &table.groups {
        for c in &grp.classes {
            let (jac, sym, j, mult) = c.parts();
            if jac + sym > 0 {
                return Err(TraceError::MissingLPolynomial);
            }
            let e = table.dimension - j as i64;
            if e < 0 {
                return Err(TraceError::BadLPolynomial(format!(
                    "negative exponent {e} in Tate-only trace"
                )));
            }
            let term = QPoly::q_pow(e as usize).scale(&BigInt::from(mult));
            if grp.i % 2 == 0 {
                acc = &acc + &term;
            } else {
                acc = &acc - &term;
            }
        }
    }
    Ok(acc)
}

/// Exponent of the leading term of the trace: the dimension D, carried by
/// the Tate(0) class in degree 0.
pub fn trace_leading_exponent(table: &CohomologyTable) -> i64 {
    table.dimension
}

/// A moduli stack of curves with level structure, presented as a weighted
/// projective stack with characteristic restrictions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuliSpec {
    pub name: String,
    pub weights: WeightVector,
    pub forbidden_characteristics: Vec<u64>,
    /// degree of the discriminant per unit n
    pub discriminant_degree: u64,
    /// order of the generic stabilizer μ_{gcd(λ)}
    pub generic_stabilizer: u64,
}

fn moduli(name: &str, lambdas: Vec<u64>, forbidden: Vec<u64>) -> ModuliSpec {
    let weights = WeightVector::new(lambdas).unwrap();
    let generic_stabilizer = weights.gcd();
    ModuliSpec {
        name: name.to_string(),
        weights,
        forbidden_characteristics: forbidden,
        discriminant_degree: 12,
        generic_stabilizer,
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Look up a moduli stack by name: stable-elliptic, gamma1-2..gamma1-12,
/// gamma-2, smyth-m2..smyth-m5, hyperelliptic-g (g ≥ 2).
pub fn moduli_lookup(name: &str) -> Result<ModuliSpec, TraceError> {
    let unknown = || TraceError::UnknownModuli(name.to_string());
    match name {
        "stable-elliptic" => Ok(moduli(name, vec![4, 6], vec![2, 3])),
        "gamma1-2" => Ok(moduli(name, vec![2, 4], vec![2])),
        "gamma1-3" => Ok(moduli(name, vec![1, 3], vec![3])),
        "gamma1-4" => Ok(moduli(name, vec![1, 2], vec![2])),
        "gamma-2" => Ok(moduli(name, vec![2, 2], vec![2])),
        "smyth-m2" => Ok(moduli(name, vec![2, 3, 4], vec![2, 3])),
        "smyth-m3" => Ok(moduli(name, vec![1, 2, 2, 3], vec![2, 3])),
        "smyth-m4" => Ok(moduli(name, vec![1, 1, 1, 2, 2], vec![2])),
        "smyth-m5" => Ok(moduli(name, vec![1, 1, 1, 1, 1, 1], vec![])),
        _ => {
            if let Some(m) = name.strip_prefix("gamma1-") {
                let m: u64 = m.parse().map_err(|_| unknown())?;
                if matches!(m, 5..=10 | 12) {
                    return Ok(moduli(name, vec![1, 1], prime_factors(m)));
                }
                return Err(unknown());
            }
            if let Some(g) = name.strip_prefix("hyperelliptic-") {
                let g: u64 = g.parse().map_err(|_| unknown())?;
                if g < 2 {
                    return Err(unknown());
                }
                // P(4, 6, …, 4g+2): 2g weights
                let lambdas: Vec<u64> = (2..=2 * g + 1).map(|k| 2 * k).collect();
                let forbidden: Vec<u64> = (2..=2 * g + 1).filter(|&p| is_prime(p)).collect();
                return Ok(moduli(name, lambdas, forbidden));
            }
            Err(unknown())
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Number of fibrations of bounded height: Σ_{n=1}^{⌊log_q B / deg Δ⌋}
/// closed_iso_count(q, λ, n). Exact geometric sum.
pub fn batyrev_manin_sum(
    spec: &ModuliSpec,
    q: u64,
    b: &BigInt,
) -> Result<BigInt, TraceError> {
    let p = smallest_prime_factor(q);
    if spec.forbidden_characteristics.contains(&p) {
        return Err(TraceError::Count(CountError::WildCharacteristic {
            p,
            lambda: *spec
                .weights
                .lambdas()
                .iter()
                .find(|&&l| l % p == 0)
                .unwrap_or(&p),
        }));
    }
    // n_max = largest n ≥ 1 with q^{deg·n} ≤ B
    let qq = BigInt::from(q);
    let mut total = BigInt::zero();
    let mut height = BigInt::one();
    let mut n = 0u64;
    loop {
        for _ in 0..spec.discriminant_degree {
            height *= &qq;
        }
        n += 1;
        if &height > b {
            break;
        }
        let r = closed_iso_count(q, &spec.weights, n)?;
        total += r.value.as_integer().expect("iso count is an integer");
    }
    Ok(total)
}

fn smallest_prime_factor(q: u64) -> u64 {
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            return d;
        }
        d += 1;
    }
    q
}

/// Leading coefficient of the Shafarevich-type count over a genus-g base:
/// 2·(q^{11−2g} − q^{9−2g})/(q^{10} − 1), paired with the height power B^{5/6}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShafarevichLeading {
    pub numerator: QPoly,
    pub denominator: QPoly,
    /// the count grows like (numerator/denominator)·B^{b_num/b_den}
    pub b_exponent: (u64, u64),
}

pub fn shafarevich_leading(g: u64) -> ShafarevichLeading {
    // 2(q^{11−2g} − q^{9−2g}) / (q^{10} − 1), cleared of negative exponents
    let two = BigInt::from(2);
    let (num, den) = if 2 * g <= 9 {
        let e = (9 - 2 * g) as usize;
        (
            (&QPoly::q_pow(e + 2) - &QPoly::q_pow(e)).scale(&two),
            &QPoly::q_pow(10) - &QPoly::one(),
        )
    } else {
        let e = (2 * g - 9) as usize;
        (
            (&QPoly::q_pow(2) - &QPoly::one()).scale(&two),
            &QPoly::q_pow(e) * &(&QPoly::q_pow(10) - &QPoly::one()),
        )
    };
    ShafarevichLeading {
        numerator: num,
        denominator: den,
        b_exponent: (5, 6),
    }
}

impl ShafarevichLeading {
    pub fn eval(&self, q: u64) -> BigRational {
        let qq = BigInt::from(q);
        BigRational::new(self.numerator.eval(&qq), self.denominator.eval(&qq))
    }
}

/// Picard group of Hom_n(P¹, P(λ)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupDescriptor {
    FiniteCyclic(u64),
    InfiniteCyclic,
}

/// Picard group: Z/(n(λ₀+λ₁)) for N = 1 (the discriminant resultant is
/// homogeneous of degree n(λ₀+λ₁)), Z for N ≥ 2. Also returns the resultant
/// degree for N = 1.
pub fn picard_group(w: &WeightVector, n: u64) -> (GroupDescriptor, Option<u64>) {
    if w.big_n() == 1 {
        let deg = n * (w.lambdas()[0] + w.lambdas()[1]);
        (GroupDescriptor::FiniteCyclic(deg), Some(deg))
    } else {
        (GroupDescriptor::InfiniteCyclic, None)
    }
}
