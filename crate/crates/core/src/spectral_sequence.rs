//! Descent spectral sequence pages for Hom_n(C, P(λ)): the exact genus-0
//! computation (E₁, E₂ via the explicit kernel/cokernel of d₁, and the final
//! cohomology table) and the stable genus-g E₂ monomial model
//! H*(J(C))[h]/h^N ⊗ ∧{t} ⊗ Sym{α_1,…,α_{2g}} restricted to columns p ≤ n−2g.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::binary_forms::WeightVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PageError {
    #[error("N and n must both be at least 1")]
    BadParameters,
    #[error("degree n = {n} is below the stable bound 2g = {bound}")]
    UnstableRange { n: u64, bound: u64 },
}

/// A bigraded page: dimension at each (−p, q). Every entry is pure of
/// weight q, so no separate weight multiset is stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageTable {
    /// (p, q) → dimension, with p stored positive for column −p
    pub entries: BTreeMap<(u64, u64), u64>,
    pub big_n: usize,
    pub n: u64,
    pub g: u64,
    /// stable cutoff n₀ = n − 2g; columns p > n₀ are not emitted for g > 0
    pub stable_cutoff: u64,
}

impl PageTable {
    pub fn dim(&self, p: u64, q: u64) -> u64 {
        self.entries.get(&(p, q)).copied().unwrap_or(0)
    }

    /// Frobenius weight of any class at (−p, q): the page is pure along q.
    pub fn weight(&self, _p: u64, q: u64) -> u64 {
        q
    }
}

/// A Frobenius-weight class in one cohomological degree: `jac` exterior
/// curve factors times `sym` symmetric curve factors times a Tate twist by j.
/// Pure Tate is jac = sym = 0; a single curve factor (jac + sym = 1) is the
/// weight-(2j+1) class CurveH1Twist(j).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum ClassEntry {
    Tate { j: u64, mult: u64 },
    #[serde(rename = "curveH1")]
    CurveH1 { j: u64, mult: u64 },
    CurveClass { jac: u64, sym: u64, j: u64, mult: u64 },
}

impl ClassEntry {
    /// (jac, sym, twist, mult); curveH1 reads as one exterior factor
    /// (e₁ = h₁, so the two readings agree).
    pub fn parts(&self) -> (u64, u64, u64, u64) {
        match *self {
            ClassEntry::Tate { j, mult } => (0, 0, j, mult),
            ClassEntry::CurveH1 { j, mult } => (1, 0, j, mult),
            ClassEntry::CurveClass { jac, sym, j, mult } => (jac, sym, j, mult),
        }
    }

    /// Frobenius weight: 2·twist + number of curve factors.
    pub fn weight(&self) -> u64 {
        let (jac, sym, j, _) = self.parts();
        2 * j + jac + sym
    }

    pub fn mult(&self) -> u64 {
        self.parts().3
    }
}

fn class_entry(jac: u64, sym: u64, j: u64, mult: u64) -> ClassEntry {
    match jac + sym {
        0 => ClassEntry::Tate { j, mult },
        1 => ClassEntry::CurveH1 { j, mult },
        _ => ClassEntry::CurveClass { jac, sym, j, mult },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeGroup {
    pub i: u64,
    pub classes: Vec<ClassEntry>,
}

/// Per-degree multisets of Frobenius-weight classes; the input to the
/// Grothendieck–Lefschetz trace evaluator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub dimension: i64,
    /// genus of the curve whose weight-1 classes appear in the table
    #[serde(default)]
    pub genus: u64,
    /// total degrees ≥ this bound lie outside the proven stable range
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stable_cutoff: Option<u64>,
    pub groups: Vec<DegreeGroup>,
}

impl CohomologyTable {
    pub fn total_dim_in_degree(&self, i: u64) -> u64 {
        self.groups
            .iter()
            .filter(|g| g.i == i)
            .flat_map(|g| g.classes.iter())
            .map(|c| c.mult())
            .sum()
    }
}

/// Exact genus-0 spectral sequence: E₁ over the ambient truncations, E₂ from
/// the explicit image/kernel of d₁, and the collapsed cohomology table
/// H^{2j} = Q(−j) for 0 ≤ j ≤ N−1, H^{2j+1} = Q(−(j+1)) for N ≤ j ≤ 2N−1.
/// Weights default to λ = (1,…,1) when not supplied; they only affect the
/// ambient truncations and the recorded dimension |λ|n + N.
pub fn genus0_pages(
    big_n: usize,
    n: u64,
    weights: Option<&WeightVector>,
) -> Result<(PageTable, PageTable, CohomologyTable), PageError> {
    if big_n < 1 || n < 1 {
        return Err(PageError::BadParameters);
    }
    let default_w;
    let w = match weights {
        Some(w) => {
            if w.big_n() != big_n {
                return Err(PageError::BadParameters);
            }
            w
        }
        None => {
            default_w = WeightVector::new(vec![1; big_n + 1]).unwrap();
            &default_w
        }
    };
    let nn = big_n as u64;
    // ambient truncations: the column-p space is
    // (P¹)^p × P(⊕_i H⁰(O(nλ_i − p))), with Σ_i (nλ_i − p + 1) slots
    let m = |p: u64| -> u64 {
        w.lambdas()
            .iter()
            .map(|&l| if n * l >= p { n * l - p + 1 } else { 0 })
            .sum()
    };
    let m0 = m(0);
    let m1 = m(1);
    let m2 = m(2);

    let mut e1 = BTreeMap::new();
    // column 0: H^{2j}(P(Λ)), one class per 0 ≤ j ≤ m0 − 1
    for j in 0..m0 {
        e1.insert((0, 2 * j), 1);
    }
    // column 1: H^{q−2N}(P¹ × P), basis {1, e}·h^j
    for j in 0..m1 {
        for eps in 0..2u64 {
            let q = 2 * j + 2 * eps + 2 * nn;
            *e1.entry((1, q)).or_insert(0) += 1;
        }
    }
    // column 2: H⁰(P¹)⊗H²(P¹)⊗H^{q−4N−2}(P), basis 1·e·h^j
    for j in 0..m2 {
        e1.insert((2, 2 * j + 4 * nn + 2), 1);
    }
    let e1 = PageTable {
        entries: e1,
        big_n,
        n,
        g: 0,
        stable_cutoff: n,
    };

    // E₂: coker(d₁¹) = Q[h]/h^N in column 0; ker(d₁¹)/im(d₁²) in column 1 is
    // spanned by (e − h)·h^j for 0 ≤ j ≤ N−1; column 2 dies (d₁² injective).
    let mut e2 = BTreeMap::new();
    for j in 0..nn.min(m0) {
        e2.insert((0, 2 * j), 1);
    }
    // kernel basis index j exists for j ≤ m1 − 2; survivors are j < N
    for j in 0..nn {
        if m1 >= 2 && j <= m1 - 2 {
            e2.insert((1, 2 * j + 2 * nn + 2), 1);
        }
    }
    let e2 = PageTable {
        entries: e2,
        big_n,
        n,
        g: 0,
        stable_cutoff: n,
    };

    let dimension = (w.total() * n) as i64 + big_n as i64;
    let mut groups = Vec::new();
    for ((p, q), &dim) in &e2.entries {
        debug_assert_eq!(dim, 1);
        let d = q - p; // total degree
        let j = q / 2; // pure Tate class of weight q
        groups.push(DegreeGroup {
            i: d,
            classes: vec![ClassEntry::Tate { j, mult: 1 }],
        });
    }
    groups.sort_by_key(|g| g.i);
    let table = CohomologyTable {
        dimension,
        genus: 0,
        stable_cutoff: None,
        groups,
    };
    Ok((e1, e2, table))
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

/// Monomials of the stable E₂ model with their bidegrees: a monomial is
/// (jac exterior degree i, h-power a < N, t ∈ {0,1}, α symmetric degree s),
/// sitting at column p = t + s with q = i + 2a + t(2N+2) + s(2N+1).
fn stable_monomials(g: u64, big_n: usize, n0: u64) -> Vec<(u64, u64, u64, u64, u64)> {
    // (i, a, t, s, mult)
    let nn = big_n as u64;
    let mut out = Vec::new();
    for t in 0..2u64 {
        if t > n0 {
            continue;
        }
        for s in 0..=(n0 - t) {
            // dim Sym^s of the 2g-dimensional H¹(C)
            let sdim = if s == 0 { 1 } else { binomial(2 * g + s - 1, s) };
            if sdim == 0 {
                continue;
            }
            for i in 0..=2 * g {
                let jdim = binomial(2 * g, i);
                if jdim == 0 {
                    continue;
                }
                for a in 0..nn {
                    out.push((i, a, t, s, jdim * sdim));
                }
            }
        }
    }
    out
}

/// Stable E₂ page for genus g: dimensions of the free graded model in
/// columns p ≤ n₀ = n − 2g.
pub fn stable_e2_table(g: u64, big_n: usize, n: u64) -> Result<PageTable, PageError> {
    if big_n < 1 || n < 1 {
        return Err(PageError::BadParameters);
    }
    if n < 2 * g {
        return Err(PageError::UnstableRange { n, bound: 2 * g });
    }
    let n0 = n - 2 * g;
    let nn = big_n as u64;
    let mut entries = BTreeMap::new();
    for (i, a, t, s, mult) in stable_monomials(g, big_n, n0) {
        let p = t + s;
        let q = i + 2 * a + t * (2 * nn + 2) + s * (2 * nn + 1);
        *entries.entry((p, q)).or_insert(0) += mult;
    }
    Ok(PageTable {
        entries,
        big_n,
        n,
        g,
        stable_cutoff: n0,
    })
}

/// Flatten the stable E₂ model along total degree q − p, recording the
/// Frobenius class of every monomial: h ↦ Tate(1), t ↦ Tate(N+1),
/// α ↦ one curve factor twisted by Tate(N), H^i(J) ↦ i curve factors.
pub fn stable_cohomology_table(
    g: u64,
    big_n: usize,
    w: &WeightVector,
    n: u64,
) -> Result<CohomologyTable, PageError> {
    if w.big_n() != big_n {
        return Err(PageError::BadParameters);
    }
    if n < 2 * g {
        return Err(PageError::UnstableRange { n, bound: 2 * g });
    }
    let n0 = n - 2 * g;
    let nn = big_n as u64;
    let mut acc: BTreeMap<(u64, u64, u64, u64), u64> = BTreeMap::new(); // (degree, jac, sym, j) → mult
    for (i, a, t, s, mult) in stable_monomials(g, big_n, n0) {
        let p = t + s;
        let q = i + 2 * a + t * (2 * nn + 2) + s * (2 * nn + 1);
        let d = q - p;
        let j = a + t * (nn + 1) + s * nn;
        *acc.entry((d, i, s, j)).or_insert(0) += mult;
    }
    let mut groups: BTreeMap<u64, Vec<ClassEntry>> = BTreeMap::new();
    for ((d, jac, sym, j), mult) in acc {
        groups
            .entry(d)
            .or_default()
            .push(class_entry(jac, sym, j, mult));
    }
    let dimension = (w.total() * n) as i64 + big_n as i64 - 2 * g as i64;
    Ok(CohomologyTable {
        dimension,
        genus: g,
        stable_cutoff: Some(n0),
        groups: groups
            .into_iter()
            .map(|(i, classes)| DegreeGroup { i, classes })
            .collect(),
    })
}
