//! Weak designs: families of equal-size subsets of `[d]` with a bounded
//! overlap sum `Σ_{j<i} 2^{|S_i ∩ S_j|} <= r·m` for every `i`.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;

/// Overlap parameter of the finite-field polynomial design, `2e`.
pub const DEFAULT_OVERLAP: f64 = 2.0 * std::f64::consts::E;

/// Exhaustive overlap verification runs while `m·t` stays at or below this.
pub const DEFAULT_VERIFY_CAP: usize = 100_000;

/// Rows checked when a design is too large for exhaustive verification.
const SAMPLED_ROWS: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct WeakDesign {
    sets: Vec<Vec<usize>>,
    set_size: usize,
    universe: usize,
    /// `max_i Σ_{j<i} 2^{|S_i ∩ S_j|} / m`, when it was computed exhaustively.
    achieved_overlap: Option<f64>,
}

impl WeakDesign {
    /// Builds a family from explicit sets. Sets are sorted; sizes and ranges
    /// are checked, the overlap bound is not (see [`verify_design`]).
    pub fn from_sets(sets: Vec<Vec<usize>>, universe: usize) -> Result<Self> {
        let set_size = sets.first().map_or(0, Vec::len);
        let mut sorted = Vec::with_capacity(sets.len());
        for (i, mut s) in sets.into_iter().enumerate() {
            if s.len() != set_size {
                return Err(Error::InvalidParameters(format!(
                    "set {i} has {} elements, expected {set_size}",
                    s.len()
                )));
            }
            s.sort_unstable();
            if let Some(&bad) = s.iter().find(|&&e| e >= universe) {
                return Err(Error::InvalidParameters(format!(
                    "set {i} contains {bad}, outside [0, {universe})"
                )));
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameters(format!(
                    "set {i} repeats an element"
                )));
            }
            sorted.push(s);
        }
        let mut design = Self {
            sets: sorted,
            set_size,
            universe,
            achieved_overlap: None,
        };
        if design.num_sets() * set_size <= DEFAULT_VERIFY_CAP {
            design.achieved_overlap =
                Some(verify_design(&design, DEFAULT_OVERLAP).achieved_overlap);
        }
        Ok(design)
    }

    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    pub fn set_size(&self) -> usize {
        self.set_size
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &[usize] {
        &self.sets[i]
    }

    pub fn achieved_overlap(&self) -> Option<f64> {
        self.achieved_overlap
    }
}

/// The design `S_i = { a·t + p_i(a) : a ∈ GF(t) }` over `[t²]`, where the
/// base-`t` digits of `i` are the coefficients of `p_i` (digit `k` is the
/// degree-`k` coefficient) and field elements are their canonical integers.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteFieldPolynomialDesign {
    design: WeakDesign,
    field: Field,
    max_degree: u32,
}

impl FiniteFieldPolynomialDesign {
    pub fn design(&self) -> &WeakDesign {
        &self.design
    }

    pub fn into_design(self) -> WeakDesign {
        self.design
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Maximum polynomial degree `c`; two sets share at most `c` elements.
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }
}

/// Smallest `c` with `t^(c+1) >= m`, or `None` when even `c = t - 1` is not
/// enough (polynomials of degree `>= t` repeat as functions on GF(t)).
pub fn minimal_degree(m: usize, t: u64) -> Option<u32> {
    let mut capacity = t as u128;
    let mut c = 0u32;
    while capacity < m as u128 {
        c += 1;
        if c as u64 >= t {
            return None;
        }
        capacity = capacity.saturating_mul(t as u128);
    }
    Some(c)
}

pub fn generate_design(m: usize, t: u64) -> Result<FiniteFieldPolynomialDesign> {
    generate_design_with_cap(m, t, DEFAULT_VERIFY_CAP)
}

/// As [`generate_design`], verifying the `2e` overlap bound exhaustively when
/// `m·t <= verify_cap`.
pub fn generate_design_with_cap(
    m: usize,
    t: u64,
    verify_cap: usize,
) -> Result<FiniteFieldPolynomialDesign> {
    let field = Field::new(t)?;
    if m == 0 {
        return Err(Error::InvalidParameters(
            "a design needs at least one set".into(),
        ));
    }
    let c = minimal_degree(m, t).ok_or(Error::TooManySets { m, t })?;
    let tt = t as usize;
    let sets: Vec<Vec<usize>> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut coeffs = Vec::with_capacity(c as usize + 1);
            let mut rest = i as u64;
            for _ in 0..=c {
                coeffs.push(rest % t);
                rest /= t;
            }
            (0..t)
                .map(|a| a as usize * tt + field.eval_poly(&coeffs, a) as usize)
                .collect()
        })
        .collect();
    let mut design = WeakDesign {
        sets,
        set_size: tt,
        universe: tt * tt,
        achieved_overlap: None,
    };
    if m.saturating_mul(tt) <= verify_cap {
        let report = verify_design(&design, DEFAULT_OVERLAP);
        if !report.pass {
            return Err(Error::InvalidParameters(format!(
                "finite-field design (m = {m}, t = {t}) violates the 2e overlap bound at set {:?}",
                report.failing_index
            )));
        }
        design.achieved_overlap = Some(report.achieved_overlap);
    }
    Ok(FiniteFieldPolynomialDesign {
        design,
        field,
        max_degree: c,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DesignReport {
    pub pass: bool,
    /// Every set has the declared size and distinct elements in range.
    pub structure_ok: bool,
    /// First index whose overlap sum exceeds `r·m`.
    pub failing_index: Option<usize>,
    /// Index with the largest overlap sum among the rows checked.
    pub worst_index: usize,
    pub worst_sum: f64,
    /// `worst_sum / m`.
    pub achieved_overlap: f64,
    /// Only a sample of rows was checked.
    pub sampled: bool,
    pub problems: Vec<String>,
}

fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

fn overlap_sum(design: &WeakDesign, i: usize) -> f64 {
    let si = &design.sets[i];
    design.sets[..i]
        .iter()
        .map(|sj| 2f64.powi(intersection_size(si, sj) as i32))
        .sum()
}

/// Checks set sizes, ranges and `Σ_{j<i} 2^{|S_i ∩ S_j|} <= r·m` for every
/// `i` (or a deterministic sample of rows past [`DEFAULT_VERIFY_CAP`]).
pub fn verify_design(design: &WeakDesign, r: f64) -> DesignReport {
    verify_design_with_cap(design, r, DEFAULT_VERIFY_CAP)
}

pub fn verify_design_with_cap(design: &WeakDesign, r: f64, cap: usize) -> DesignReport {
    let m = design.num_sets();
    let mut problems = Vec::new();
    for (i, s) in design.sets.iter().enumerate() {
        if s.len() != design.set_size {
            problems.push(format!(
                "set {i} has {} elements, expected {}",
                s.len(),
                design.set_size
            ));
        }
        if s.iter().any(|&e| e >= design.universe) {
            problems.push(format!(
                "set {i} has elements outside [0, {})",
                design.universe
            ));
        }
        if s.windows(2).any(|w| w[0] >= w[1]) {
            problems.push(format!("set {i} is not strictly increasing"));
        }
    }
    let structure_ok = problems.is_empty();

    let sampled = m.saturating_mul(design.set_size) > cap;
    let rows: Vec<usize> = if sampled {
        let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
        let mut picked = sample(&mut rng, m, SAMPLED_ROWS.min(m)).into_vec();
        picked.sort_unstable();
        picked
    } else {
        (0..m).collect()
    };
    let sums: Vec<(usize, f64)> = rows
        .par_iter()
        .map(|&i| (i, overlap_sum(design, i)))
        .collect();

    let bound = r * m as f64;
    let failing_index = sums.iter().find(|(_, s)| *s > bound).map(|&(i, _)| i);
    let (worst_index, worst_sum) =
        sums.iter().copied().fold(
            (0, 0.0),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        );
    if let Some(i) = failing_index {
        problems.push(format!("overlap sum at set {i} exceeds r·m = {bound}"));
    }
    DesignReport {
        pass: structure_ok && failing_index.is_none(),
        structure_ok,
        failing_index,
        worst_index,
        worst_sum,
        achieved_overlap: if m == 0 { 0.0 } else { worst_sum / m as f64 },
        sampled,
        problems,
    }
}
