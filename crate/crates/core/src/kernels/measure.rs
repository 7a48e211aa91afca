//! Positive measures on `(0, inf)` whose tails define radial kernel profiles.

use crate::error::{Error, Result};

/// A point mass `mass` at radius `location`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

/// A family of atoms, either listed or generated by a closed-form rule.
#[derive(Debug, Clone, PartialEq)]
pub enum AtomFamily {
    Finite(Vec<Atom>),
    /// Atoms at `first * ratio^(n-1)` with masses `mass0 * mass_ratio^n`,
    /// `n = 1, 2, ...`. Locations accumulate at the origin.
    Geometric {
        first: f64,
        ratio: f64,
        mass0: f64,
        mass_ratio: f64,
    },
}

/// Absolutely continuous part of the measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityTerm {
    /// `coeff * s^exponent` on `(lo, hi]`; `hi` may be infinite.
    Power { coeff: f64, exponent: f64, lo: f64, hi: f64 },
    /// `coeff * exp(-rate s)` on `(0, inf)`.
    Exponential { coeff: f64, rate: f64 },
}

impl DensityTerm {
    pub fn value(&self, s: f64) -> f64 {
        match *self {
            DensityTerm::Power { coeff, exponent, lo, hi } => {
                if s > lo && s <= hi {
                    coeff * s.powf(exponent)
                } else {
                    0.0
                }
            }
            DensityTerm::Exponential { coeff, rate } => coeff * (-rate * s).exp(),
        }
    }

    /// Mass of `(r, inf)`.
    pub fn tail(&self, r: f64) -> f64 {
        match *self {
            DensityTerm::Power { coeff, exponent, lo, hi } => {
                let from = r.max(lo);
                if from >= hi {
                    return 0.0;
                }
                if exponent == -1.0 {
                    return coeff * (hi / from).ln();
                }
                let p1 = exponent + 1.0;
                let upper = if hi.is_infinite() { 0.0 } else { hi.powf(p1) };
                coeff * (upper - from.powf(p1)) / p1
            }
            DensityTerm::Exponential { coeff, rate } => coeff / rate * (-rate * r).exp(),
        }
    }

    fn support_infimum(&self) -> f64 {
        match *self {
            DensityTerm::Power { coeff, lo, .. } if coeff > 0.0 => lo,
            DensityTerm::Exponential { coeff, .. } if coeff > 0.0 => 0.0,
            _ => f64::INFINITY,
        }
    }

    fn scaled(&self, w: f64) -> Self {
        match *self {
            DensityTerm::Power { coeff, exponent, lo, hi } => DensityTerm::Power {
                coeff: coeff * w,
                exponent,
                lo,
                hi,
            },
            DensityTerm::Exponential { coeff, rate } => DensityTerm::Exponential { coeff: coeff * w, rate },
        }
    }
}

impl AtomFamily {
    /// Number of generated atoms strictly beyond `r` (rule-generated family).
    fn geometric_count_above(first: f64, ratio: f64, r: f64) -> usize {
        if r >= first {
            return 0;
        }
        let guess = ((r / first).ln() / ratio.ln()).ceil().max(1.0) as usize;
        let loc = |n: usize| first * ratio.powi(n as i32 - 1);
        let mut n = guess;
        while n > 0 && loc(n) <= r {
            n -= 1;
        }
        while loc(n + 1) > r {
            n += 1;
        }
        n
    }

    fn tail(&self, r: f64) -> f64 {
        match self {
            AtomFamily::Finite(atoms) => atoms.iter().filter(|a| a.location > r).map(|a| a.mass).sum(),
            AtomFamily::Geometric {
                first,
                ratio,
                mass0,
                mass_ratio,
            } => {
                let n = Self::geometric_count_above(*first, *ratio, r);
                geometric_mass_sum(*mass0, *mass_ratio, n)
            }
        }
    }

    fn for_each_in<F: FnMut(Atom)>(&self, lo: f64, hi: f64, f: &mut F) {
        match self {
            AtomFamily::Finite(atoms) => {
                for a in atoms.iter().filter(|a| a.location > lo && a.location <= hi) {
                    f(*a);
                }
            }
            AtomFamily::Geometric {
                first,
                ratio,
                mass0,
                mass_ratio,
            } => {
                let n_max = Self::geometric_count_above(*first, *ratio, lo);
                for n in 1..=n_max {
                    let location = first * ratio.powi(n as i32 - 1);
                    if location <= hi {
                        f(Atom {
                            location,
                            mass: mass0 * mass_ratio.powi(n as i32),
                        });
                    }
                }
            }
        }
    }

    fn support_infimum(&self) -> f64 {
        match self {
            AtomFamily::Finite(atoms) => atoms.iter().map(|a| a.location).fold(f64::INFINITY, f64::min),
            AtomFamily::Geometric { .. } => 0.0,
        }
    }

    fn scaled(&self, w: f64) -> Self {
        match self {
            AtomFamily::Finite(atoms) => AtomFamily::Finite(
                atoms
                    .iter()
                    .map(|a| Atom {
                        location: a.location,
                        mass: a.mass * w,
                    })
                    .collect(),
            ),
            AtomFamily::Geometric {
                first,
                ratio,
                mass0,
                mass_ratio,
            } => AtomFamily::Geometric {
                first: *first,
                ratio: *ratio,
                mass0: mass0 * w,
                mass_ratio: *mass_ratio,
            },
        }
    }
}

fn geometric_mass_sum(mass0: f64, rho: f64, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if (rho - 1.0).abs() < 1e-15 {
        return mass0 * n as f64;
    }
    mass0 * rho * (rho.powi(n as i32) - 1.0) / (rho - 1.0)
}

/// Tail measure `nu` with `j(r) = nu((r, inf))`. Atoms plus a density.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TailMeasure {
    atoms: Vec<AtomFamily>,
    density: Vec<DensityTerm>,
}

impl TailMeasure {
    pub fn new(atoms: Vec<AtomFamily>, density: Vec<DensityTerm>) -> Result<Self> {
        for fam in &atoms {
            match fam {
                AtomFamily::Finite(list) => {
                    for a in list {
                        if !(a.location > 0.0 && a.location.is_finite()) {
                            return Err(Error::InvalidParameter(format!(
                                "atom location must be positive and finite, got {}",
                                a.location
                            )));
                        }
                        if !(a.mass > 0.0 && a.mass.is_finite()) {
                            return Err(Error::InvalidParameter(format!(
                                "atom mass must be positive and finite, got {}",
                                a.mass
                            )));
                        }
                    }
                }
                AtomFamily::Geometric {
                    first,
                    ratio,
                    mass0,
                    mass_ratio,
                } => {
                    if !(*first > 0.0 && first.is_finite()) {
                        return Err(Error::InvalidParameter("first atom location must be positive".into()));
                    }
                    if !(*ratio > 0.0 && *ratio < 1.0) {
                        return Err(Error::InvalidParameter(format!(
                            "location ratio must lie in (0, 1), got {ratio}"
                        )));
                    }
                    if !(*mass0 > 0.0 && *mass_ratio > 0.0) {
                        return Err(Error::InvalidParameter("atom masses must be positive".into()));
                    }
                }
            }
        }
        for d in &density {
            match *d {
                DensityTerm::Power { coeff, exponent, lo, hi } => {
                    if !(coeff >= 0.0) || !(lo >= 0.0) || !(hi > lo) {
                        return Err(Error::InvalidParameter("bad power density term".into()));
                    }
                    if hi.is_infinite() && exponent >= -1.0 {
                        return Err(Error::InvalidParameter(
                            "power density with infinite support needs exponent < -1 for a finite tail".into(),
                        ));
                    }
                }
                DensityTerm::Exponential { coeff, rate } => {
                    if !(coeff >= 0.0) || !(rate > 0.0) {
                        return Err(Error::InvalidParameter("bad exponential density term".into()));
                    }
                }
            }
        }
        Ok(Self { atoms, density })
    }

    pub fn atom_families(&self) -> &[AtomFamily] {
        &self.atoms
    }

    pub fn density_terms(&self) -> &[DensityTerm] {
        &self.density
    }

    pub fn has_density(&self) -> bool {
        !self.density.is_empty()
    }

    /// `nu((r, inf))`.
    pub fn tail(&self, r: f64) -> f64 {
        self.atoms.iter().map(|a| a.tail(r)).sum::<f64>() + self.density.iter().map(|d| d.tail(r)).sum::<f64>()
    }

    pub fn density(&self, s: f64) -> f64 {
        self.density.iter().map(|d| d.value(s)).sum()
    }

    /// Calls `f` for every atom with location in `(lo, hi]`.
    pub fn for_each_atom_in<F: FnMut(Atom)>(&self, lo: f64, hi: f64, mut f: F) {
        for fam in &self.atoms {
            fam.for_each_in(lo, hi, &mut f);
        }
    }

    /// Locations in `(lo, hi)` where the density or the profile may jump.
    pub fn breakpoints_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut out = Vec::new();
        self.for_each_atom_in(lo, hi, |a| {
            if a.location < hi {
                out.push(a.location)
            }
        });
        for d in &self.density {
            if let DensityTerm::Power { lo: a, hi: b, .. } = *d {
                for p in [a, b] {
                    if p > lo && p < hi {
                        out.push(p);
                    }
                }
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// `inf supp(nu)`; zero exactly when `j` strictly exceeds every `j(rho)` near 0.
    pub fn support_infimum(&self) -> f64 {
        let a = self.atoms.iter().map(|a| a.support_infimum()).fold(f64::INFINITY, f64::min);
        let d = self.density.iter().map(|d| d.support_infimum()).fold(f64::INFINITY, f64::min);
        a.min(d)
    }

    pub fn scaled(&self, w: f64) -> Self {
        Self {
            atoms: self.atoms.iter().map(|a| a.scaled(w)).collect(),
            density: self.density.iter().map(|d| d.scaled(w)).collect(),
        }
    }

    pub fn merged(parts: impl IntoIterator<Item = TailMeasure>) -> Self {
        let mut out = TailMeasure::default();
        for p in parts {
            out.atoms.extend(p.atoms);
            out.density.extend(p.density);
        }
        out
    }
}
