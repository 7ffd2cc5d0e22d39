//! Transport of vibrational moments through a completed pump process.
//!
//! A trajectory displaces the oscillator by its recoil shift `α`, so every
//! normally ordered moment of the pumped level is a binomial mix of initial
//! moments weighted by recoil moments:
//!
//! ```text
//! ⟨b†ᵏbˡ⟩₂(∞) = P₂⟨b†ᵏbˡ⟩₂ + P₁ Σₙ Σₘ C(k,n) C(l,m) ⟨α*^{k−n} α^{l−m}⟩_p ⟨b†ⁿbᵐ⟩₁
//! ```
//!
//! All moments here are normally ordered unless a function says otherwise.

use num_complex::Complex64;
#[allow(unused_imports)] // float math under no_std
use num_traits::Float;

use crate::moments::RecoilMomentSet;

/// Highest total order `k + l` handled by the general map.
pub const MAX_ORDER: usize = 4;

const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MappingError {
    #[error("invalid vibrational moments: {0}")]
    InvariantViolation(&'static str),
    #[error("recoil moment ⟨α*^{k} α^{l}⟩ is not available in closed form")]
    UnsuppliedMoment { k: usize, l: usize },
    #[error("initial moment ⟨b†^{k} b^{l}⟩ was not supplied")]
    UnsuppliedInitialMoment { k: usize, l: usize },
    #[error("order k + l = {0} exceeds {MAX_ORDER}")]
    UnsupportedOrder(usize),
}

/// Conditional moments of one electronic level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelMoments {
    pub population: f64,
    /// `⟨b⟩`.
    pub b: Complex64,
    /// `⟨b†b⟩`.
    pub n: f64,
    /// `⟨b²⟩`.
    pub b2: Complex64,
    /// `⟨b†²b²⟩`.
    pub b2b2: f64,
}

impl LevelMoments {
    pub fn empty() -> Self {
        LevelMoments { population: 0.0, b: Complex64::new(0.0, 0.0), n: 0.0, b2: Complex64::new(0.0, 0.0), b2b2: 0.0 }
    }

    /// Vibrational ground state with the given population.
    pub fn ground(population: f64) -> Self {
        LevelMoments { population, ..Self::empty() }
    }

    /// Coherent state `|β⟩`.
    pub fn coherent(population: f64, beta: Complex64) -> Self {
        let n = beta.norm_sqr();
        LevelMoments { population, b: beta, n, b2: beta * beta, b2b2: n * n }
    }

    /// Thermal state with mean occupation `n`.
    pub fn thermal(population: f64, n: f64) -> Self {
        LevelMoments { population, n, b2b2: 2.0 * n * n, ..Self::empty() }
    }

    /// Converts symmetrically ordered moments (`⟨{b†b}⟩ = ⟨b†b⟩ + 1/2`, ...)
    /// to normal order. `⟨b⟩` and `⟨b²⟩` do not depend on the ordering.
    pub fn from_symmetric(population: f64, b: Complex64, n_sym: f64, b2: Complex64, b2b2_sym: f64) -> Self {
        let t = MomentTable::level(&LevelMoments { population, b, n: n_sym, b2, b2b2: b2b2_sym });
        let t = t.symmetric_to_normal();
        LevelMoments {
            population,
            b,
            n: t.get(1, 1).map_or(0.0, |c| c.re),
            b2,
            b2b2: t.get(2, 2).map_or(0.0, |c| c.re),
        }
    }

    /// `⟨(Δn)²⟩ = ⟨b†²b²⟩ − ⟨n⟩(⟨n⟩ − 1)`.
    pub fn number_variance(&self) -> f64 {
        self.b2b2 - self.n * (self.n - 1.0)
    }

    /// `⟨(Δq_φ)²⟩` for `q_φ = (b e^{iφ} + b† e^{−iφ})/√2`.
    pub fn quadrature_variance(&self, phi: f64) -> f64 {
        let rot = Complex64::from_polar(1.0, phi);
        let q = core::f64::consts::SQRT_2 * (self.b * rot).re;
        self.n + 0.5 + (self.b2 * rot * rot).re - q * q
    }

    fn check(&self) -> Result<(), MappingError> {
        let finite = self.population.is_finite()
            && self.b.re.is_finite()
            && self.b.im.is_finite()
            && self.n.is_finite()
            && self.b2.re.is_finite()
            && self.b2.im.is_finite()
            && self.b2b2.is_finite();
        if !finite {
            return Err(MappingError::InvariantViolation("moments must be finite"));
        }
        if !(0.0..=1.0).contains(&self.population) {
            return Err(MappingError::InvariantViolation("population outside [0, 1]"));
        }
        if self.n < self.b.norm_sqr() - TOL * (1.0 + self.n) {
            return Err(MappingError::InvariantViolation("⟨n⟩ < |⟨b⟩|²"));
        }
        if self.b2b2 < -TOL {
            return Err(MappingError::InvariantViolation("⟨b†²b²⟩ < 0"));
        }
        Ok(())
    }
}

/// Moments of both electronic levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VibrationalMomentSet {
    /// Excited level that is pumped away.
    pub level1: LevelMoments,
    /// Pumped level.
    pub level2: LevelMoments,
}

impl VibrationalMomentSet {
    pub fn new(level1: LevelMoments, level2: LevelMoments) -> Result<Self, MappingError> {
        let s = VibrationalMomentSet { level1, level2 };
        s.validate()?;
        Ok(s)
    }

    /// Vibrational and electronic ground state.
    pub fn ground() -> Self {
        VibrationalMomentSet { level1: LevelMoments::ground(1.0), level2: LevelMoments::empty() }
    }

    pub fn validate(&self) -> Result<(), MappingError> {
        self.level1.check()?;
        self.level2.check()?;
        if (self.level1.population + self.level2.population - 1.0).abs() > TOL {
            return Err(MappingError::InvariantViolation("populations do not sum to 1"));
        }
        Ok(())
    }

    /// Population-weighted moments `⟨…⟩ = Σ_a P_a ⟨…⟩_a`.
    pub fn total(&self) -> LevelMoments {
        let (p1, p2) = (self.level1.population, self.level2.population);
        let (a, b) = (&self.level1, &self.level2);
        LevelMoments {
            population: p1 + p2,
            b: a.b * p1 + b.b * p2,
            n: p1 * a.n + p2 * b.n,
            b2: a.b2 * p1 + b.b2 * p2,
            b2b2: p1 * a.b2b2 + p2 * b.b2b2,
        }
    }
}

/// Moments of the pumped level after the pump has completed. Level 1 is
/// empty in the result.
pub fn map_state(initial: &VibrationalMomentSet, rm: &RecoilMomentSet) -> Result<VibrationalMomentSet, MappingError> {
    initial.validate()?;
    let p1 = initial.level1.population;
    let one = &initial.level1;
    let all = initial.total();
    let added4 = 2.0 * (rm.alpha2 * one.b2.conj()).re + 4.0 * rm.n_bar * one.n + rm.alpha4;
    let level2 = LevelMoments {
        population: 1.0,
        b: all.b,
        n: all.n + p1 * rm.n_bar,
        b2: all.b2 + rm.alpha2 * p1,
        b2b2: all.b2b2 + p1 * added4,
    };
    Ok(VibrationalMomentSet { level1: LevelMoments::empty(), level2 })
}

/// `⟨(Δq_φ)²⟩₂(∞) = ⟨(Δq_φ)²⟩(0) + P₁ δq²_{p,φ}`.
pub fn quadrature_variance_map(
    initial: &VibrationalMomentSet,
    rm: &RecoilMomentSet,
    phi: f64,
) -> Result<f64, MappingError> {
    initial.validate()?;
    Ok(initial.total().quadrature_variance(phi) + initial.level1.population * rm.quadrature_variance(phi))
}

/// The initial-state numbers entering the number-variance map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumberVarianceTerms {
    pub m1: f64,
    pub m2: f64,
}

pub fn number_variance_terms(initial: &VibrationalMomentSet, rm: &RecoilMomentSet) -> NumberVarianceTerms {
    let (l1, l2) = (&initial.level1, &initial.level2);
    let tilt = (l1.b2 * Complex64::from_polar(1.0, -rm.phi_a)).re;
    NumberVarianceTerms { m1: l1.n + 0.5 - rm.anisotropy * tilt, m2: 0.5 * rm.n_bar + l1.n - l2.n }
}

/// `⟨(Δn)²⟩₂(∞) = ⟨(Δn)²⟩(0) + P₁ {δn_p² + 2n̄_p [m₁ + P₂ m₂]}`.
pub fn number_variance_map(initial: &VibrationalMomentSet, rm: &RecoilMomentSet) -> Result<f64, MappingError> {
    initial.validate()?;
    let t = number_variance_terms(initial, rm);
    let (p1, p2) = (initial.level1.population, initial.level2.population);
    Ok(initial.total().number_variance() + p1 * (rm.dn_sq + 2.0 * rm.n_bar * (t.m1 + p2 * t.m2)))
}

fn binomial(n: usize, k: usize) -> f64 {
    const ROWS: [[f64; 5]; 5] = [
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 2.0, 1.0, 0.0, 0.0],
        [1.0, 3.0, 3.0, 1.0, 0.0],
        [1.0, 4.0, 6.0, 4.0, 1.0],
    ];
    ROWS[n][k]
}

/// `⟨x*ᵏ xˡ⟩` for `k + l ≤ 4`, each entry optional.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MomentTable {
    entries: [[Option<Complex64>; MAX_ORDER + 1]; MAX_ORDER + 1],
}

impl MomentTable {
    pub fn get(&self, k: usize, l: usize) -> Option<Complex64> {
        if k + l > MAX_ORDER {
            return None;
        }
        self.entries[k][l]
    }

    /// Sets `⟨x*ᵏxˡ⟩` and its conjugate partner `⟨x*ˡxᵏ⟩`.
    pub fn set(&mut self, k: usize, l: usize, v: Complex64) {
        assert!(k + l <= MAX_ORDER, "moment order above {MAX_ORDER}");
        self.entries[k][l] = Some(v);
        self.entries[l][k] = Some(v.conj());
    }

    /// Recoil moments available in closed form. Odd orders vanish because
    /// every emission direction is as likely as its reverse; the mixed
    /// `⟨α*α³⟩` has no closed form and stays unsupplied.
    pub fn recoil(rm: &RecoilMomentSet) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let mut t = MomentTable::default();
        t.set(0, 0, Complex64::new(1.0, 0.0));
        t.set(0, 1, zero);
        t.set(0, 3, zero);
        t.set(1, 2, zero);
        t.set(1, 1, Complex64::new(rm.n_bar, 0.0));
        t.set(0, 2, rm.alpha2);
        t.set(2, 2, Complex64::new(rm.alpha4, 0.0));
        t.set(0, 4, rm.alpha4_complex);
        t
    }

    /// Every moment up to order 4 as a plain sample average.
    pub fn from_samples<I: IntoIterator<Item = Complex64>>(samples: I) -> Self {
        let mut acc = [[Complex64::new(0.0, 0.0); MAX_ORDER + 1]; MAX_ORDER + 1];
        let mut n = 0u64;
        for a in samples {
            n += 1;
            let c = a.conj();
            let mut ck = Complex64::new(1.0, 0.0);
            for row in acc.iter_mut().take(MAX_ORDER + 1) {
                let mut term = ck;
                for cell in row.iter_mut().take(MAX_ORDER + 1) {
                    *cell += term;
                    term *= a;
                }
                ck *= c;
            }
        }
        let mut t = MomentTable::default();
        if n > 0 {
            for (k, row) in acc.iter().enumerate() {
                for (l, v) in row.iter().enumerate().take(MAX_ORDER + 1 - k) {
                    t.entries[k][l] = Some(v / n as f64);
                }
            }
        }
        t
    }

    /// The moments a [`LevelMoments`] carries.
    pub fn level(m: &LevelMoments) -> Self {
        let mut t = MomentTable::default();
        t.set(0, 0, Complex64::new(1.0, 0.0));
        t.set(0, 1, m.b);
        t.set(1, 1, Complex64::new(m.n, 0.0));
        t.set(0, 2, m.b2);
        t.set(2, 2, Complex64::new(m.b2b2, 0.0));
        t
    }

    /// `⟨b†ᵏbˡ⟩ = Σⱼ j! C(k,j) C(l,j) (−1/2)ʲ ⟨{b†^{k−j}b^{l−j}}⟩`. An entry
    /// stays unsupplied if any symmetric moment it needs is missing.
    pub fn symmetric_to_normal(&self) -> Self {
        self.reorder(-0.5)
    }

    /// Inverse of [`symmetric_to_normal`](Self::symmetric_to_normal).
    pub fn normal_to_symmetric(&self) -> Self {
        self.reorder(0.5)
    }

    fn reorder(&self, step: f64) -> Self {
        let mut out = MomentTable::default();
        for k in 0..=MAX_ORDER {
            for l in 0..=MAX_ORDER - k {
                let mut sum = Complex64::new(0.0, 0.0);
                let mut ok = true;
                let (mut fact, mut pow) = (1.0, 1.0);
                for j in 0..=k.min(l) {
                    if j > 0 {
                        fact *= j as f64;
                        pow *= step;
                    }
                    match self.entries[k - j][l - j] {
                        Some(v) => sum += v * (fact * binomial(k, j) * binomial(l, j) * pow),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    out.entries[k][l] = Some(sum);
                }
            }
        }
        out
    }
}

/// General moment map for `k + l ≤ 4`.
///
/// Terms whose recoil weight is exactly zero are dropped, so initial
/// moments they would multiply need not be supplied.
pub fn leibniz_map(
    k: usize,
    l: usize,
    p1: f64,
    p2: f64,
    level1: &MomentTable,
    level2: &MomentTable,
    recoil: &MomentTable,
) -> Result<Complex64, MappingError> {
    if k + l > MAX_ORDER {
        return Err(MappingError::UnsupportedOrder(k + l));
    }
    let mut pumped = Complex64::new(0.0, 0.0);
    for n in 0..=k {
        for m in 0..=l {
            let w = recoil.get(k - n, l - m).ok_or(MappingError::UnsuppliedMoment { k: k - n, l: l - m })?;
            if w == Complex64::new(0.0, 0.0) {
                continue;
            }
            let b = level1.get(n, m).ok_or(MappingError::UnsuppliedInitialMoment { k: n, l: m })?;
            pumped += w * b * (binomial(k, n) * binomial(l, m));
        }
    }
    let stay = if p2 == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        level2.get(k, l).ok_or(MappingError::UnsuppliedInitialMoment { k, l })? * p2
    };
    Ok(stay + pumped * p1)
}
