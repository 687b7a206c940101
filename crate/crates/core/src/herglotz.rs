//! Finitely atomic probability measures on the unit circle.
//!
//! A measure `μ = Σ t_j δ_{λ_j}` generates the Carathéodory function
//! `h(z) = ∫ (1+λz)/(1-λz) dμ(λ)` and, through `1 + z f''/f' = h`, a convex
//! map. Atom positions are stored as `arg λ / π` normalised to `(-1, 1]`,
//! which keeps the JSON form exact and lets quarter turns evaluate exactly.
//!
//! An atom at `λ` makes the generated map singular at the boundary point
//! `z = conj(λ)`; helpers that talk about boundary points say so explicitly.
//!
//! Only discrete measures are represented; absolutely continuous parts are
//! out of reach by construction.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{TaylorSeries, C64};

/// Atoms closer than this (in arc length) are merged.
pub const MERGE_ARC: f64 = 1e-12;
const WEIGHT_SUM_TOL: f64 = 1e-14;
pub const APPENDIX_TOL: f64 = 1e-9;

/// `e^{iπx}`, exact at multiples of one half.
pub fn cis_pi(x: f64) -> C64 {
    let r = x.rem_euclid(2.0);
    if r == 0.0 {
        C64::new(1.0, 0.0)
    } else if r == 0.5 {
        C64::new(0.0, 1.0)
    } else if r == 1.0 {
        C64::new(-1.0, 0.0)
    } else if r == 1.5 {
        C64::new(0.0, -1.0)
    } else {
        let (s, c) = (PI * r).sin_cos();
        C64::new(c, s)
    }
}

/// Reduces `x` into `(-1, 1]`.
pub fn normalize_arg(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r > 1.0 {
        r - 2.0
    } else {
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub arg_over_pi: f64,
    pub weight: f64,
}

impl Atom {
    pub fn new(arg_over_pi: f64, weight: f64) -> Self {
        Self {
            arg_over_pi,
            weight,
        }
    }

    pub fn lambda(&self) -> C64 {
        cis_pi(self.arg_over_pi)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Atom>", into = "Vec<Atom>")]
pub struct DiscreteMeasure {
    atoms: Vec<Atom>,
}

impl TryFrom<Vec<Atom>> for DiscreteMeasure {
    type Error = Error;

    fn try_from(atoms: Vec<Atom>) -> Result<Self> {
        Self::new(atoms)
    }
}

impl From<DiscreteMeasure> for Vec<Atom> {
    fn from(m: DiscreteMeasure) -> Self {
        m.atoms
    }
}

fn arc_distance(a: f64, b: f64) -> f64 {
    PI * normalize_arg(a - b).abs()
}

impl DiscreteMeasure {
    /// Validates and canonicalises: args reduced to `(-1, 1]`, nearby atoms
    /// merged, atoms sorted by argument.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        for a in &atoms {
            if !a.arg_over_pi.is_finite() || !a.weight.is_finite() || a.weight <= 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "atom {a:?} needs a finite argument and a positive weight"
                )));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidMeasure(format!("total mass {total} != 1")));
        }
        let mut sorted: Vec<Atom> = atoms
            .into_iter()
            .map(|a| Atom::new(normalize_arg(a.arg_over_pi), a.weight))
            .collect();
        sorted.sort_by(|a, b| a.arg_over_pi.total_cmp(&b.arg_over_pi));
        let mut merged: Vec<Atom> = Vec::with_capacity(sorted.len());
        for a in sorted {
            match merged.last_mut() {
                Some(last) if arc_distance(last.arg_over_pi, a.arg_over_pi) < MERGE_ARC => {
                    last.weight += a.weight;
                }
                _ => merged.push(a),
            }
        }
        if merged.len() > 1 {
            let first = merged[0];
            let last = merged[merged.len() - 1];
            if arc_distance(first.arg_over_pi, last.arg_over_pi) < MERGE_ARC {
                merged[0].weight += last.weight;
                merged.pop();
            }
        }
        Ok(Self { atoms: merged })
    }

    /// Like [`new`](Self::new) but rescales the weights to total mass one.
    pub fn normalized(atoms: Vec<Atom>) -> Result<Self> {
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        if !(total > 0.0) {
            return Err(Error::InvalidMeasure("non-positive total mass".into()));
        }
        Self::new(
            atoms
                .into_iter()
                .map(|a| Atom::new(a.arg_over_pi, a.weight / total))
                .collect(),
        )
    }

    pub fn dirac(arg_over_pi: f64) -> Self {
        Self {
            atoms: vec![Atom::new(normalize_arg(arg_over_pi), 1.0)],
        }
    }

    /// `t δ_1 + (1-t) δ_{-1}`, the measure of the sector map of opening `(2t-1)π`.
    pub fn two_point(t: f64) -> Result<Self> {
        if t >= 1.0 {
            return Ok(Self::dirac(0.0));
        }
        Self::new(vec![Atom::new(0.0, t), Atom::new(1.0, 1.0 - t)])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn moment(&self, k: u32) -> C64 {
        self.atoms
            .iter()
            .map(|a| cis_pi(a.arg_over_pi * k as f64) * a.weight)
            .sum()
    }

    /// `h(z) = 1 + Σ 2 m_n z^n`.
    pub fn caratheodory_series(&self, order: usize) -> TaylorSeries {
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(C64::new(1.0, 0.0));
        coeffs.extend((1..=order).map(|n| self.moment(n as u32) * 2.0));
        TaylorSeries::new(coeffs).expect("moments are bounded")
    }

    /// `h(z)` evaluated pointwise.
    pub fn caratheodory_value(&self, z: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        self.atoms
            .iter()
            .map(|a| {
                let lz = a.lambda() * z;
                (one + lz) / (one - lz) * a.weight
            })
            .sum()
    }

    /// Boundary rotation `2π μ([t_a, t_b))`, the interval taken in the
    /// argument of `λ` (radians).
    pub fn boundary_rotation(&self, arc: (f64, f64)) -> f64 {
        let (ta, tb) = arc;
        let width = tb - ta;
        if width >= 2.0 * PI {
            return 2.0 * PI;
        }
        if width <= 0.0 {
            return 0.0;
        }
        let mass: f64 = self
            .atoms
            .iter()
            .filter(|a| (PI * a.arg_over_pi - ta).rem_euclid(2.0 * PI) < width)
            .map(|a| a.weight)
            .sum();
        2.0 * PI * mass
    }

    /// Mass of the atom at `arg λ = π·arg_over_pi`, if any.
    pub fn mass_at(&self, arg_over_pi: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| arc_distance(a.arg_over_pi, arg_over_pi) < MERGE_ARC)
            .map(|a| a.weight)
            .sum()
    }

    /// `(2μ(λ₀) - 1)π`; requires `μ(λ₀) ≥ 1/2`.
    pub fn angle_at_infinity(&self, arg_over_pi: f64) -> Result<f64> {
        let mass = self.mass_at(arg_over_pi);
        if mass < 0.5 {
            return Err(Error::NoPoleMass { mass });
        }
        Ok((2.0 * mass - 1.0) * PI)
    }

    /// The heaviest atom.
    pub fn heaviest(&self) -> Atom {
        *self
            .atoms
            .iter()
            .max_by(|a, b| a.weight.total_cmp(&b.weight))
            .expect("measures have atoms")
    }

    /// Boundary points `z = conj(λ)` where the generated convex map is infinite.
    pub fn poles(&self) -> Vec<f64> {
        self.atoms
            .iter()
            .filter(|a| a.weight >= 0.5)
            .map(|a| normalize_arg(-a.arg_over_pi))
            .collect()
    }

    /// Vanishing first moment plus a half-mass atom forces
    /// `μ = ½(δ_{λ₀} + δ_{-λ₀})`.
    ///
    /// The conclusion is tested quantitatively. With `|m₁| ≤ tol` and
    /// `μ(λ₀) ≥ ½ - tol`, writing `Re(conj(λ₀) m₁) = 2μ(λ₀) - 1 + 2S` with
    /// `S = Σ_{λ≠λ₀} t cos²(θ/2)` (θ measured from λ₀) forces
    /// `|μ(λ₀) - ½| ≤ tol` and `S ≤ 3tol/2`. A violation of either is a
    /// counterexample.
    pub fn appendix_check(&self, tol: f64) -> AppendixCheck {
        let m1 = self.moment(1).norm();
        let pole = self.heaviest();
        let triggered = m1 <= tol && pole.weight >= 0.5 - tol;
        if !triggered {
            return AppendixCheck {
                triggered,
                conforms: true,
                witness: None,
            };
        }
        let off_antipode: f64 = self
            .atoms
            .iter()
            .filter(|a| **a != pole)
            .map(|a| {
                let half = 0.5 * PI * normalize_arg(a.arg_over_pi - pole.arg_over_pi);
                a.weight * half.cos().powi(2)
            })
            .sum();
        let witness = AppendixWitness {
            pole_arg_over_pi: pole.arg_over_pi,
            pole_mass: pole.weight,
            first_moment_abs: m1,
            mass_defect: (pole.weight - 0.5).abs(),
            off_antipode_mass: off_antipode,
        };
        let slack = 1.0 + 1e-6;
        let conforms = witness.mass_defect <= tol * slack + 4.0 * f64::EPSILON
            && witness.off_antipode_mass <= 1.5 * tol * slack + 4.0 * f64::EPSILON;
        AppendixCheck {
            triggered,
            conforms,
            witness: Some(witness),
        }
    }

    /// `atoms` atoms (2..=5 in the verification suites) with uniform
    /// arguments and Dirichlet(1, ..., 1) weights.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, atoms: usize) -> Self {
        loop {
            let raw: Vec<Atom> = (0..atoms)
                .map(|_| {
                    let e: f64 = Exp1.sample(rng);
                    Atom::new(rng.gen_range(-1.0..1.0), e.max(1e-300))
                })
                .collect();
            if let Ok(m) = Self::normalized(raw) {
                return m;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AppendixWitness {
    pub pole_arg_over_pi: f64,
    pub pole_mass: f64,
    pub first_moment_abs: f64,
    pub mass_defect: f64,
    pub off_antipode_mass: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AppendixCheck {
    /// Whether the hypotheses (zero moment, half-mass atom) hold within tolerance.
    pub triggered: bool,
    pub conforms: bool,
    pub witness: Option<AppendixWitness>,
}

/// Outcome of pushing a measure with a fixed heavy atom towards zero first
/// moment by redistributing the remaining mass over fixed positions.
#[derive(Clone, Debug)]
pub struct ZeroMomentProjection {
    pub residual: f64,
    pub measure: DiscreteMeasure,
}

fn closest_on_segment(a: C64, b: C64) -> (f64, C64) {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (0.0, a);
    }
    let s = (-(a.re * d.re + a.im * d.im) / len2).clamp(0.0, 1.0);
    (s, a + d * s)
}

fn barycentric_origin(p: [C64; 3]) -> Option<[f64; 3]> {
    let cross = |u: C64, v: C64| u.re * v.im - u.im * v.re;
    let area = cross(p[1] - p[0], p[2] - p[0]);
    if area.abs() < 1e-300 {
        return None;
    }
    let w0 = cross(p[1], p[2]) / area;
    let w1 = cross(p[2], p[0]) / area;
    let w2 = cross(p[0], p[1]) / area;
    (w0 >= 0.0 && w1 >= 0.0 && w2 >= 0.0).then_some([w0, w1, w2])
}

/// Minimises `|m λ₀ + (1-m) Σ w_j λ_j|` over the simplex of weights `w`
/// on the given positions, exactly: the image of the simplex is the convex
/// hull of finitely many points, so the minimiser is the origin (if
/// enclosed by some triangle), an edge foot point or a vertex.
pub fn project_to_zero_moment(
    pole_arg_over_pi: f64,
    pole_mass: f64,
    other_args: &[f64],
) -> Result<ZeroMomentProjection> {
    if other_args.is_empty() || !(0.0..1.0).contains(&pole_mass) {
        return Err(Error::InvalidMeasure("need other atoms and pole mass < 1".into()));
    }
    let base = cis_pi(pole_arg_over_pi) * pole_mass;
    let rest = 1.0 - pole_mass;
    let pts: Vec<C64> = other_args.iter().map(|&a| base + cis_pi(a) * rest).collect();
    let k = pts.len();

    let mut best_weights = vec![0.0; k];
    let mut best = f64::INFINITY;
    let mut consider = |res: f64, w: Vec<f64>| {
        if res < best {
            best = res;
            best_weights = w;
        }
    };
    for i in 0..k {
        let mut w = vec![0.0; k];
        w[i] = 1.0;
        consider(pts[i].norm(), w);
        for j in i + 1..k {
            let (s, q) = closest_on_segment(pts[i], pts[j]);
            let mut w = vec![0.0; k];
            w[i] = 1.0 - s;
            w[j] = s;
            consider(q.norm(), w);
            for l in j + 1..k {
                if let Some(b) = barycentric_origin([pts[i], pts[j], pts[l]]) {
                    let mut w = vec![0.0; k];
                    w[i] = b[0];
                    w[j] = b[1];
                    w[l] = b[2];
                    let q = pts[i] * b[0] + pts[j] * b[1] + pts[l] * b[2];
                    consider(q.norm(), w);
                }
            }
        }
    }
    let mut atoms = vec![Atom::new(pole_arg_over_pi, pole_mass)];
    atoms.extend(
        other_args
            .iter()
            .zip(&best_weights)
            .filter(|(_, &w)| w > 0.0)
            .map(|(&a, &w)| Atom::new(a, rest * w)),
    );
    let measure = DiscreteMeasure::normalized(atoms)?;
    Ok(ZeroMomentProjection {
        residual: measure.moment(1).norm(),
        measure,
    })
}

/// Statistics of a randomized counterexample search for the
/// zero-moment/half-mass structure theorem.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AppendixSearchReport {
    pub samples: usize,
    pub feasible: usize,
    pub triggered: usize,
    pub counterexamples: usize,
    pub worst_mass_defect: f64,
    pub worst_off_antipode: f64,
}

/// Draws measures with a heavy atom (mass in `[1/2, 1)`), projects each to
/// zero first moment where the positions allow it, and runs
/// [`DiscreteMeasure::appendix_check`] on the result.
///
/// A share of the samples place an atom exactly at the antipode or within a
/// tiny angle of it so that the hypotheses actually fire.
pub fn appendix_search<R: Rng + ?Sized>(rng: &mut R, samples: usize, tol: f64) -> AppendixSearchReport {
    let mut report = AppendixSearchReport {
        samples,
        ..Default::default()
    };
    for _ in 0..samples {
        let pole_arg = rng.gen_range(-1.0..1.0);
        let pole_mass = if rng.gen_bool(0.4) { 0.5 } else { rng.gen_range(0.5..1.0) };
        let others = rng.gen_range(1..=4);
        let mut args: Vec<f64> = (0..others).map(|_| rng.gen_range(-1.0..1.0)).collect();
        match rng.gen_range(0..10) {
            0..=2 => args[0] = pole_arg + 1.0,
            3 => args[0] = pole_arg + 1.0 + rng.gen_range(-1e-4..1e-4) * rng.gen::<f64>().powi(4),
            _ => {}
        }
        let Ok(proj) = project_to_zero_moment(pole_arg, pole_mass, &args) else {
            continue;
        };
        if proj.residual > tol {
            continue;
        }
        report.feasible += 1;
        let check = proj.measure.appendix_check(tol);
        if check.triggered {
            report.triggered += 1;
        }
        if let Some(w) = &check.witness {
            report.worst_mass_defect = report.worst_mass_defect.max(w.mass_defect);
            report.worst_off_antipode = report.worst_off_antipode.max(w.off_antipode_mass);
        }
        if !check.conforms {
            report.counterexamples += 1;
        }
    }
    report
}
