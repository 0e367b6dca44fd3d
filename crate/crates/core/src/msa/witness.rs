//! Turning a signature into two explicit equilibria with rate constants.

use num_traits::{One, Signed, Zero};

use crate::kinetics::{KineticSystem, TMatrix};
use crate::linalg::{sign_compatible_sigma, solve_feasibility, LinearConstraint, RationalMatrix, Relation};
use crate::rational::{from_f64, sign_of, to_f64, Rational};
use crate::verify::{check_witness, VerificationReport, Witness, DEFAULT_TOL};

/// How the log-ratio vector `μ` is given.
#[derive(Clone, Debug, PartialEq)]
pub enum MuSource {
    /// Exact values of `μ`.
    Fixed(Vec<f64>),
    /// A direction; the scale is searched for.
    Direction(Vec<Rational>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessOptions {
    pub sigma: Option<Vec<Rational>>,
    pub kappa: Option<Vec<f64>>,
    /// Common value of both equilibria on species with `μ_s = 0`.
    pub p: f64,
    pub tol: f64,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        Self {
            sigma: None,
            kappa: None,
            p: 1.0,
            tol: DEFAULT_TOL,
        }
    }
}

/// Relative tolerances tried, in order, for `N diag(E) κ = 0` in the `κ` program.
const KAPPA_TOLERANCES: [f64; 5] = [0.0, 1e-9, 1e-7, 1e-6, 1e-5];
const SCALE_FACTORS: [f64; 8] = [1.0, 0.5, 2.0, 0.25, 4.0, 0.1, 10.0, 0.01];

/// Per-species ratio `r_s = c*_s / c**_s` together with `r_s - 1`, both as accurate
/// as the construction allows.
#[derive(Clone, Debug)]
struct Ratios {
    mu: Vec<f64>,
    r: Vec<f64>,
    r_minus_one: Vec<f64>,
}

impl Ratios {
    fn from_mu(mu: Vec<f64>) -> Self {
        let r = mu.iter().map(|m| m.exp()).collect();
        let r_minus_one = mu.iter().map(|m| m.exp_m1()).collect();
        Self { mu, r, r_minus_one }
    }

    /// `r_s = t^{d_s}` for an integer direction `d` and base `t`.
    fn from_base(t: f64, direction: &[i32]) -> Self {
        let r: Vec<f64> = direction.iter().map(|&d| t.powi(d)).collect();
        let r_minus_one = r.iter().map(|x| x - 1.0).collect();
        let mu = direction.iter().map(|&d| d as f64 * t.ln()).collect();
        Self { mu, r, r_minus_one }
    }
}

struct Context<'a> {
    system: &'a KineticSystem,
    t: &'a TMatrix,
    n: RationalMatrix,
    n_f: Vec<Vec<f64>>,
    f_rows: Vec<Vec<f64>>,
}

impl<'a> Context<'a> {
    fn new(system: &'a KineticSystem, t: &'a TMatrix) -> Self {
        let n = system.network().stoichiometric_matrix();
        let n_f = (0..n.rows()).map(|s| n.row(s).iter().map(to_f64).collect()).collect();
        let f_rows = (0..system.network().num_reactions())
            .map(|j| system.kinetic_order_row(j).iter().map(to_f64).collect())
            .collect();
        Self { system, t, n, n_f, f_rows }
    }

    /// `E_j = Π_s r_s^{F_js}`.
    fn exponentials(&self, ratios: &Ratios) -> Vec<f64> {
        self.f_rows
            .iter()
            .map(|row| {
                let direct = row
                    .iter()
                    .zip(&ratios.r)
                    .filter(|(e, _)| **e != 0.0)
                    .fold(1.0, |acc, (e, r)| acc * r.powf(*e));
                if direct.is_finite() && direct > 0.0 {
                    direct
                } else {
                    row.iter().zip(&ratios.mu).map(|(e, m)| e * m).sum::<f64>().exp()
                }
            })
            .collect()
    }

    /// Row-normalised values of `N diag(E) κ`.
    fn normalized_residual(&self, e: &[f64], kappa: &[f64]) -> Vec<f64> {
        self.n_f
            .iter()
            .map(|row| {
                let (mut sum, mut scale) = (0.0, 0.0);
                for ((a, ej), kj) in row.iter().zip(e).zip(kappa) {
                    sum += a * ej * kj;
                    scale += a.abs() * ej * kj;
                }
                if scale > 0.0 {
                    sum / scale
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// Positive `κ` with `N κ = 0` exactly and `N diag(E) κ ≈ 0`.
    fn solve_kappa(&self, e: &[f64]) -> Option<Vec<f64>> {
        let e_exact: Vec<Rational> = e.iter().map(|v| from_f64(*v)).collect::<Option<_>>()?;
        let r = e.len();
        for eps in KAPPA_TOLERANCES {
            let eps_q = from_f64(eps)?;
            let mut constraints: Vec<LinearConstraint> = (0..r)
                .map(|j| LinearConstraint::new([(j, Rational::one())], Relation::Ge, Rational::one()))
                .collect();
            for s in 0..self.n.rows() {
                let row = self.n.row(s);
                if row.iter().all(Zero::is_zero) {
                    continue;
                }
                constraints.push(LinearConstraint::new(
                    row.iter().cloned().enumerate(),
                    Relation::Eq,
                    Rational::zero(),
                ));
                let weighted = |sign: i64| {
                    row.iter()
                        .zip(&e_exact)
                        .enumerate()
                        .map(|(j, (a, ej))| {
                            let slack = &eps_q * a.abs() * Rational::from_integer(sign.into());
                            (j, (a + slack) * ej)
                        })
                        .collect::<Vec<_>>()
                };
                if eps == 0.0 {
                    constraints.push(LinearConstraint::new(weighted(0), Relation::Eq, Rational::zero()));
                } else {
                    constraints.push(LinearConstraint::new(weighted(-1), Relation::Le, Rational::zero()));
                    constraints.push(LinearConstraint::new(weighted(1), Relation::Ge, Rational::zero()));
                }
            }
            if let Some(kappa) = solve_feasibility(r, &constraints).into_sample() {
                return Some(kappa.iter().map(to_f64).collect());
            }
        }
        None
    }

    /// Assembles and verifies the witness for given ratios, `σ` and `κ`.
    fn assemble(
        &self,
        ratios: &Ratios,
        sigma: &[Rational],
        kappa: Vec<f64>,
        options: &WitnessOptions,
    ) -> Option<(Witness, VerificationReport)> {
        let mut c_star = Vec::new();
        let mut c_double_star = Vec::new();
        for (s, sig) in sigma.iter().enumerate() {
            if ratios.mu[s] == 0.0 {
                c_star.push(options.p);
                c_double_star.push(options.p);
            } else {
                let cdd = to_f64(sig) / ratios.r_minus_one[s];
                c_double_star.push(cdd);
                c_star.push(cdd * ratios.r[s]);
            }
        }
        let k: Vec<f64> = kappa
            .iter()
            .zip(&self.f_rows)
            .map(|(kj, row)| {
                let denom = row
                    .iter()
                    .zip(&c_double_star)
                    .filter(|(e, _)| **e != 0.0)
                    .fold(1.0, |acc, (e, c)| acc * c.powf(*e));
                if denom.is_finite() && denom > 0.0 {
                    kj / denom
                } else {
                    let log: f64 = row.iter().zip(&c_double_star).map(|(e, c)| e * c.ln()).sum();
                    (kj.ln() - log).exp()
                }
            })
            .collect();
        let witness = Witness {
            mu: ratios.mu.clone(),
            sigma: sigma.to_vec(),
            c_star,
            c_double_star,
            kappa,
            k,
        };
        let report = check_witness(self.system, &witness, options.tol).ok()?;
        report.pass.then_some((witness, report))
    }

    fn attempt(&self, ratios: &Ratios, sigma: &[Rational], options: &WitnessOptions) -> Option<(Witness, VerificationReport)> {
        let e = self.exponentials(ratios);
        let kappa = match &options.kappa {
            Some(k) => k.clone(),
            None => self.solve_kappa(&e)?,
        };
        self.assemble(ratios, sigma, kappa, options)
    }

    /// Largest `|T_y · d|` over reactant complexes.
    fn exponent_scale(&self, direction: &[f64]) -> f64 {
        (0..self.t.matrix.cols())
            .map(|c| {
                self.t
                    .column(c)
                    .iter()
                    .zip(direction)
                    .map(|(a, d)| to_f64(a) * d)
                    .sum::<f64>()
                    .abs()
            })
            .fold(0.0, f64::max)
    }

    /// Scales `s` at which `N diag(E(s d)) κ` vanishes for the hinted `κ`.
    fn kappa_roots(&self, direction: &[f64], kappa: &[f64], s0: f64) -> Vec<f64> {
        let residual = |s: f64| {
            let ratios = Ratios::from_mu(direction.iter().map(|d| d * s).collect());
            self.normalized_residual(&self.exponentials(&ratios), kappa)
        };
        let worst = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if worst(&residual(s0)) <= 1e-12 {
            return vec![s0];
        }
        const STEPS: usize = 600;
        let grid: Vec<f64> = (0..=STEPS)
            .map(|i| s0 * 10f64.powf(-3.0 + 6.0 * i as f64 / STEPS as f64))
            .collect();
        let values: Vec<Vec<f64>> = grid.iter().map(|&s| residual(s)).collect();
        let mut roots = Vec::new();
        for species in 0..self.n_f.len() {
            for w in 0..STEPS {
                let (a, b) = (values[w][species], values[w + 1][species]);
                if a == 0.0 || a.signum() == b.signum() {
                    continue;
                }
                let (mut lo, mut hi) = (grid[w], grid[w + 1]);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if residual(mid)[species].signum() == a.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let root = 0.5 * (lo + hi);
                if worst(&residual(root)) <= 1e-9 {
                    roots.push(root);
                }
                break;
            }
        }
        roots
    }
}

/// Best rational approximation with denominator at most `max_den`, by continued fractions.
fn snap(x: f64, max_den: i64) -> f64 {
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut v = x;
    let mut best = x;
    for _ in 0..40 {
        let a = v.floor();
        if a.abs() > 1e12 {
            break;
        }
        let ai = a as i64;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > max_den {
            break;
        }
        best = h2 as f64 / k2 as f64;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = v - a;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    best
}

fn in_subspace(n: &RationalMatrix, v: &[Rational]) -> bool {
    let mut cols: Vec<Vec<Rational>> = (0..n.cols()).map(|j| n.column(j)).collect();
    cols.push(v.to_vec());
    RationalMatrix::from_columns(n.rows(), &cols).rank() == n.rank()
}

fn choose_sigma(ctx: &Context<'_>, signs: &[i8], options: &WitnessOptions) -> Option<Vec<Rational>> {
    match &options.sigma {
        Some(sigma) => {
            let matches = sigma.len() == signs.len() && sigma.iter().zip(signs).all(|(v, s)| sign_of(v) == *s);
            (matches && in_subspace(&ctx.n, sigma)).then(|| sigma.clone())
        }
        None => {
            let as_rational: Vec<Rational> = signs.iter().map(|s| Rational::from_integer((*s).into())).collect();
            sign_compatible_sigma(&as_rational, &ctx.n)
        }
    }
}

/// The two concentration vectors implied by a supplied `μ` and `σ`.
///
/// Computed whether or not the rate constants can be balanced, so a caller can
/// compare them with published values even when verification fails.
#[derive(Clone, Debug, PartialEq)]
pub struct HintEquilibria {
    pub mu: Vec<f64>,
    pub sigma: Vec<Rational>,
    pub c_star: Vec<f64>,
    pub c_double_star: Vec<f64>,
    /// Whether `σ` lies in the stoichiometric subspace.
    pub sigma_in_subspace: bool,
    pub verified: bool,
}

pub fn hint_equilibria(
    system: &KineticSystem,
    t: &TMatrix,
    mu: &[f64],
    options: &WitnessOptions,
) -> Option<HintEquilibria> {
    let ctx = Context::new(system, t);
    let signs: Vec<i8> = mu
        .iter()
        .map(|v| if *v > 0.0 { 1 } else if *v < 0.0 { -1 } else { 0 })
        .collect();
    if signs.len() != system.network().num_species() || signs.iter().all(|s| *s == 0) {
        return None;
    }
    let sigma = match &options.sigma {
        Some(user) if user.len() == signs.len() && user.iter().zip(&signs).all(|(v, s)| sign_of(v) == *s) => user.clone(),
        Some(_) => return None,
        None => choose_sigma(&ctx, &signs, options)?,
    };
    let sigma_in_subspace = in_subspace(&ctx.n, &sigma);
    let ratios = Ratios::from_mu(mu.to_vec());
    let (c_star, c_double_star) = sigma
        .iter()
        .enumerate()
        .map(|(s, sig)| {
            if ratios.mu[s] == 0.0 {
                (options.p, options.p)
            } else {
                let cdd = to_f64(sig) / ratios.r_minus_one[s];
                (cdd * ratios.r[s], cdd)
            }
        })
        .unzip();
    let verified = sigma_in_subspace && ctx.attempt(&ratios, &sigma, options).is_some();
    Some(HintEquilibria { mu: mu.to_vec(), sigma, c_star, c_double_star, sigma_in_subspace, verified })
}

/// Builds and verifies a witness from `μ` (fixed or up to scale).
///
/// Returns `None` when no candidate passes verification.
pub fn construct_witness(
    system: &KineticSystem,
    t: &TMatrix,
    mu: &MuSource,
    options: &WitnessOptions,
) -> Option<(Witness, VerificationReport)> {
    let ctx = Context::new(system, t);
    match mu {
        MuSource::Fixed(values) => {
            let signs: Vec<i8> = values
                .iter()
                .map(|v| if *v > 0.0 { 1 } else if *v < 0.0 { -1 } else { 0 })
                .collect();
            if signs.iter().all(|s| *s == 0) {
                return None;
            }
            let sigma = choose_sigma(&ctx, &signs, options)?;
            ctx.attempt(&Ratios::from_mu(values.clone()), &sigma, options)
        }
        MuSource::Direction(direction) => {
            if direction.iter().all(Zero::is_zero) {
                return None;
            }
            let direction = crate::rational::primitive_integer_vector(direction);
            let signs: Vec<i8> = direction.iter().map(sign_of).collect();
            let sigma = choose_sigma(&ctx, &signs, options)?;
            let d: Vec<f64> = direction.iter().map(to_f64).collect();
            let base = ctx.exponent_scale(&d);
            let s0 = if base > 0.0 { 1.0 / base } else { 1.0 };
            match &options.kappa {
                Some(kappa) => {
                    let small: Option<Vec<i32>> = direction
                        .iter()
                        .map(|v| v.to_integer().try_into().ok().filter(|x: &i32| x.abs() <= 64))
                        .collect();
                    for s in ctx.kappa_roots(&d, kappa, s0) {
                        let plain = Ratios::from_mu(d.iter().map(|x| x * s).collect());
                        if let Some(ints) = &small {
                            let t = snap(s.exp(), 100);
                            if (t - s.exp()).abs() <= 1e-9 * s.exp() && t > 0.0 && t != 1.0 {
                                let snapped = Ratios::from_base(t, ints);
                                let e_snap = ctx.exponentials(&snapped);
                                let e_plain = ctx.exponentials(&plain);
                                let worst = |e: &[f64]| {
                                    ctx.normalized_residual(e, kappa).iter().fold(0.0_f64, |m, x| m.max(x.abs()))
                                };
                                if worst(&e_snap) <= worst(&e_plain) {
                                    if let Some(found) = ctx.attempt(&snapped, &sigma, options) {
                                        return Some(found);
                                    }
                                }
                            }
                        }
                        if let Some(found) = ctx.attempt(&plain, &sigma, options) {
                            return Some(found);
                        }
                    }
                    None
                }
                None => SCALE_FACTORS.iter().find_map(|f| {
                    let ratios = Ratios::from_mu(d.iter().map(|x| x * s0 * f).collect());
                    ctx.attempt(&ratios, &sigma, options)
                }),
            }
        }
    }
}

/// Whether `σ` is a nonzero vector in the stoichiometric subspace with the signs of `μ`.
pub fn sigma_matches(system: &KineticSystem, mu: &[Rational], sigma: &[Rational]) -> bool {
    let n = system.network().stoichiometric_matrix();
    let mut cols: Vec<Vec<Rational>> = (0..n.cols()).map(|j| n.column(j)).collect();
    cols.push(sigma.to_vec());
    sigma.iter().any(|v| !v.is_zero())
        && mu.iter().zip(sigma).all(|(a, b)| sign_of(a) == sign_of(b))
        && RationalMatrix::from_columns(n.rows(), &cols).rank() == n.rank()
}
