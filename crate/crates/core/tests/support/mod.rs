//! Oracles, generators and property drivers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use msa_core::kinetics::{cf_rm_transform, KineticSystem, KineticsClass};
use msa_core::linalg::{orthocomplement_restricted, solve_feasibility, LinearConstraint, RationalMatrix, Relation};
use msa_core::msa::{
    analyze, check_rules, enumerate_sign_patterns, realign, AnalysisOptions, EquivalencePartition,
    FundamentalClasses, Orientation, Shelf, Shelvings,
};
use msa_core::network::{Complex, ReactionNetwork, ReactionSpec};
use msa_core::rational::{int, ratio, to_f64, Rational};
use msa_core::verify::{check_witness, Witness};
use msa_core::MsaError;

pub type Q = Rational;

pub fn zero() -> Q {
    int(0)
}

pub fn is_zero(q: &Q) -> bool {
    *q == zero()
}

pub fn abs(q: &Q) -> Q {
    if *q < zero() {
        -q.clone()
    } else {
        q.clone()
    }
}

pub fn ints(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rank by plain Gaussian elimination over the rationals.
pub fn oracle_rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !is_zero(&m[r][c])) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !is_zero(&m[r][c]) {
                let f = m[r][c].clone() / m[rank][c].clone();
                for k in 0..cols {
                    let v = m[rank][k].clone() * f.clone();
                    m[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn columns(m: &[Vec<Q>], keep: impl Fn(usize) -> bool) -> Vec<Vec<Q>> {
    m.iter()
        .map(|row| row.iter().enumerate().filter(|(j, _)| keep(*j)).map(|(_, v)| v.clone()).collect())
        .collect()
}

pub fn random_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, span: i64) -> Vec<Vec<Q>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| int(rng.gen_range(-span..=span))).collect())
        .collect()
}

/// Outcome of one property suite.
#[derive(Debug)]
pub struct SuiteRun {
    pub cases: usize,
    /// Cases where the interesting branch was exercised (feasible systems, emitted witnesses, ...).
    pub exercised: usize,
    pub elapsed: Duration,
}

type SuiteResult = Result<SuiteRun, String>;

/// Kernel, row space and restricted orthocomplement on random integer matrices.
pub fn suite_nullspace(cases: usize, seed: u64) -> SuiteResult {
    let start = Instant::now();
    let mut rng = seeded(seed);
    let mut exercised = 0;
    for case in 0..cases {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=8);
        let mut data = random_int_matrix(&mut rng, rows, cols, 4);
        if rows > 1 && rng.gen_bool(0.3) {
            // Force a dependent row.
            let a = rng.gen_range(-2i64..=2);
            let combo: Vec<Q> = data[0].iter().map(|v| v.clone() * int(a)).collect();
            data[rows - 1] = combo;
        }
        let m = RationalMatrix::from_rows(data.clone());
        let rank = oracle_rank(&data);
        if m.rank() != rank {
            return Err(format!("case {case}: rank {} vs oracle {rank}", m.rank()));
        }
        let kernel = m.nullspace();
        if kernel.len() != cols - rank {
            return Err(format!("case {case}: kernel dimension {} vs {}", kernel.len(), cols - rank));
        }
        if !kernel.is_empty() {
            exercised += 1;
            if oracle_rank(&kernel) != kernel.len() {
                return Err(format!("case {case}: kernel basis is dependent"));
            }
        }
        for v in &kernel {
            if data.iter().any(|row| !is_zero(&dot(row, v))) {
                return Err(format!("case {case}: M v != 0"));
            }
        }
        let row_space = m.row_space_basis();
        if row_space.len() != rank {
            return Err(format!("case {case}: row space dimension"));
        }
        let mut stacked = data.clone();
        stacked.extend(row_space.iter().cloned());
        if oracle_rank(&stacked) != rank {
            return Err(format!("case {case}: row space basis leaves the row space"));
        }
        for r in &row_space {
            if kernel.iter().any(|v| !is_zero(&dot(r, v))) {
                return Err(format!("case {case}: row space not orthogonal to kernel"));
            }
        }
        let mut support: Vec<usize> = (0..cols).filter(|_| rng.gen_bool(0.6)).collect();
        if support.is_empty() {
            support.push(0);
        }
        let ortho = orthocomplement_restricted(&m, &support);
        let restricted_kernel: Vec<Vec<Q>> =
            kernel.iter().map(|v| support.iter().map(|&j| v[j].clone()).collect()).collect();
        let expected = support.len() - if restricted_kernel.is_empty() { 0 } else { oracle_rank(&restricted_kernel) };
        if ortho.len() != expected {
            return Err(format!("case {case}: orthocomplement dimension {} vs {expected}", ortho.len()));
        }
        if !ortho.is_empty() && oracle_rank(&ortho) != ortho.len() {
            return Err(format!("case {case}: orthocomplement basis is dependent"));
        }
        for w in &ortho {
            let mut full = vec![zero(); cols];
            for (k, &j) in support.iter().enumerate() {
                full[j] = w[k].clone();
            }
            if kernel.iter().any(|v| !is_zero(&dot(&full, v))) {
                return Err(format!("case {case}: orthocomplement vector meets the kernel"));
            }
            let mut with = data.clone();
            with.push(full);
            if oracle_rank(&with) != rank {
                return Err(format!("case {case}: orthocomplement vector outside the row space"));
            }
        }
    }
    Ok(SuiteRun { cases, exercised, elapsed: start.elapsed() })
}

/// `a·x ≤ b` (or `<` when strict).
#[derive(Clone, Debug)]
struct Row {
    a: Vec<Q>,
    b: Q,
    strict: bool,
}

/// Decides feasibility of a linear system by Fourier-Motzkin elimination.
pub fn fm_feasible(num_vars: usize, constraints: &[LinearConstraint]) -> bool {
    let mut rows = Vec::new();
    for c in constraints {
        let mut a = vec![zero(); num_vars];
        for (v, q) in &c.coeffs {
            a[*v] += q.clone();
        }
        let neg = |a: &[Q]| a.iter().map(|x| -x.clone()).collect::<Vec<_>>();
        let b = c.rhs.clone();
        match c.relation {
            Relation::Le => rows.push(Row { a, b, strict: false }),
            Relation::Lt => rows.push(Row { a, b, strict: true }),
            Relation::Ge => rows.push(Row { a: neg(&a), b: -b, strict: false }),
            Relation::Gt => rows.push(Row { a: neg(&a), b: -b, strict: true }),
            Relation::Eq => {
                rows.push(Row { a: neg(&a), b: -b.clone(), strict: false });
                rows.push(Row { a, b, strict: false });
            }
        }
    }
    for k in 0..num_vars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.a[k] > zero() {
                pos.push(r);
            } else if r.a[k] < zero() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        for p in &pos {
            for n in &neg {
                let (sp, sn) = (abs(&p.a[k]), abs(&n.a[k]));
                let a: Vec<Q> = p
                    .a
                    .iter()
                    .zip(&n.a)
                    .map(|(x, y)| x.clone() / sp.clone() + y.clone() / sn.clone())
                    .collect();
                let b = p.b.clone() / sp.clone() + n.b.clone() / sn.clone();
                rest.push(Row { a, b, strict: p.strict || n.strict });
            }
        }
        rows = rest;
    }
    rows.iter().all(|r| if r.strict { zero() < r.b } else { zero() <= r.b })
}

fn random_relation(rng: &mut ChaCha8Rng) -> Relation {
    *[Relation::Eq, Relation::Lt, Relation::Le, Relation::Gt, Relation::Ge].choose(rng).unwrap()
}

/// Exact simplex feasibility against Fourier-Motzkin on random small systems.
pub fn suite_feasibility(cases: usize, seed: u64) -> SuiteResult {
    let start = Instant::now();
    let mut rng = seeded(seed);
    let mut exercised = 0;
    for case in 0..cases {
        let vars = rng.gen_range(1..=6);
        let count = rng.gen_range(1..=6);
        let constraints: Vec<LinearConstraint> = (0..count)
            .map(|_| {
                let mut coeffs: Vec<(usize, Q)> = Vec::new();
                for v in 0..vars {
                    if rng.gen_bool(0.7) {
                        coeffs.push((v, int(rng.gen_range(-3..=3))));
                    }
                }
                let rhs = if rng.gen_bool(0.5) { zero() } else { int(rng.gen_range(-3..=3)) };
                LinearConstraint::new(coeffs, random_relation(&mut rng), rhs)
            })
            .collect();
        let expected = fm_feasible(vars, &constraints);
        let result = solve_feasibility(vars, &constraints);
        if result.is_feasible() != expected {
            return Err(format!("case {case}: simplex says {}, elimination says {expected}: {constraints:?}", result.is_feasible()));
        }
        if let Some(x) = result.sample() {
            exercised += 1;
            if let Some(bad) = constraints.iter().find(|c| !c.holds(x)) {
                return Err(format!("case {case}: sample violates {bad:?}"));
            }
        }
    }
    Ok(SuiteRun { cases, exercised, elapsed: start.elapsed() })
}

fn species_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("A{i}")).collect()
}

fn random_complex(rng: &mut ChaCha8Rng, m: usize, allow_zero: bool) -> Complex {
    loop {
        let mut terms: Vec<(usize, Q)> = Vec::new();
        for s in 0..m {
            if rng.gen_bool(0.45) {
                terms.push((s, int(rng.gen_range(1..=2))));
            }
        }
        let c = Complex::from_terms(terms).expect("nonnegative coefficients");
        if allow_zero || !c.is_zero() {
            return c;
        }
    }
}

/// A random network with at most `max_reactions` directed reactions.
pub fn random_network(rng: &mut ChaCha8Rng, max_species: usize, max_reactions: usize, allow_zero: bool) -> ReactionNetwork {
    loop {
        let m = rng.gen_range(1..=max_species);
        let mut specs = Vec::new();
        let mut directed = 0;
        let target = rng.gen_range(2..=max_reactions);
        let mut seen = BTreeSet::new();
        let mut attempts = 0;
        while directed < target && attempts < 50 {
            attempts += 1;
            let reactant = random_complex(rng, m, allow_zero);
            let product = random_complex(rng, m, allow_zero);
            if reactant == product
                || seen.contains(&(reactant.clone(), product.clone()))
                || seen.contains(&(product.clone(), reactant.clone()))
            {
                continue;
            }
            let reversible = directed + 2 <= target && rng.gen_bool(0.3);
            seen.insert((reactant.clone(), product.clone()));
            directed += if reversible { 2 } else { 1 };
            specs.push(ReactionSpec { reactant, product, reversible });
        }
        if let Ok(net) = ReactionNetwork::build(species_names(m), &specs) {
            return net;
        }
    }
}

fn small_positive(rng: &mut ChaCha8Rng) -> Q {
    ratio(rng.gen_range(1..=9), rng.gen_range(1..=4))
}

/// Reactant-determined kinetic orders drawn per reactant complex.
pub fn random_rdk(rng: &mut ChaCha8Rng, net: ReactionNetwork) -> KineticSystem {
    let m = net.num_species();
    let mut per_complex: Vec<Option<Vec<Q>>> = vec![None; net.num_complexes()];
    let rows: Vec<Vec<Q>> = (0..net.num_reactions())
        .map(|j| {
            let c = net.reactions()[j].reactant;
            per_complex[c]
                .get_or_insert_with(|| {
                    net.reactant(j)
                        .to_dense(m)
                        .iter()
                        .map(|v| if rng.gen_bool(0.4) { v.clone() + ratio(rng.gen_range(-2..=2), 2) } else { v.clone() })
                        .collect()
                })
                .clone()
        })
        .collect();
    KineticSystem::new(net, RationalMatrix::from_rows(rows), None).expect("shape")
}

/// Integer kinetic orders chosen per reaction, so shared reactants usually disagree.
pub fn random_integer_orders(rng: &mut ChaCha8Rng, net: ReactionNetwork) -> KineticSystem {
    let m = net.num_species();
    let rows: Vec<Vec<Q>> = (0..net.num_reactions())
        .map(|_| (0..m).map(|_| int(rng.gen_range(0..=2))).collect())
        .collect();
    KineticSystem::new(net, RationalMatrix::from_rows(rows), None).expect("shape")
}

/// Species formation rate `Σ k_j x^{F_j} (y'_j - y_j)` evaluated exactly.
pub fn exact_sfrf(system: &KineticSystem, k: &[Q], x: &[Q]) -> Vec<Q> {
    let net = system.network();
    let m = net.num_species();
    let mut f = vec![zero(); m];
    for j in 0..net.num_reactions() {
        let mut rate = k[j].clone();
        for (e, xs) in system.kinetic_order_row(j).iter().zip(x) {
            assert!(e.is_integer(), "integer orders expected");
            let p = e.to_integer();
            let mut power = int(1);
            let n: i64 = p.to_string().parse().unwrap();
            for _ in 0..n.abs() {
                power *= xs.clone();
            }
            rate *= if n < 0 { int(1) / power } else { power };
        }
        let y = net.reactant(j).to_dense(m);
        let y2 = net.product(j).to_dense(m);
        for s in 0..m {
            f[s] += rate.clone() * (y2[s].clone() - y[s].clone());
        }
    }
    f
}

/// Reactant-multiple transform: reaction vectors and exact dynamics are preserved.
pub fn suite_cfrm(cases: usize, seed: u64) -> SuiteResult {
    let start = Instant::now();
    let mut rng = seeded(seed);
    let mut exercised = 0;
    let mut case = 0;
    while case < cases {
        let net = random_network(&mut rng, 3, 6, true);
        let system = random_integer_orders(&mut rng, net);
        if system.classify() != KineticsClass::Ndk {
            continue;
        }
        case += 1;
        let (transformed, record) = match cf_rm_transform(&system) {
            Ok(done) => done,
            Err(MsaError::ZeroComplexNotFactorizable) => continue,
            Err(e) => return Err(format!("case {case}: transform failed: {e}")),
        };
        exercised += 1;
        if transformed.classify() != KineticsClass::Rdk {
            return Err(format!("case {case}: transform is not reactant-determined"));
        }
        if record.is_identity() {
            return Err(format!("case {case}: non-reactant-determined system left unchanged"));
        }
        let (a, b) = (system.network(), transformed.network());
        if a.num_reactions() != b.num_reactions() {
            return Err(format!("case {case}: reaction count changed"));
        }
        for j in 0..a.num_reactions() {
            if a.reactions()[j].id != b.reactions()[j].id || a.reaction_vector(j) != b.reaction_vector(j) {
                return Err(format!("case {case}: reaction {} changed its vector", a.reactions()[j].id));
            }
            if system.kinetic_order_row(j) != transformed.kinetic_order_row(j) {
                return Err(format!("case {case}: kinetic orders changed"));
            }
        }
        for _ in 0..5 {
            let k: Vec<Q> = (0..a.num_reactions()).map(|_| small_positive(&mut rng)).collect();
            let x: Vec<Q> = (0..a.num_species()).map(|_| small_positive(&mut rng)).collect();
            if exact_sfrf(&system, &k, &x) != exact_sfrf(&transformed, &k, &x) {
                return Err(format!("case {case}: rate functions differ at {x:?}"));
            }
        }
    }
    Ok(SuiteRun { cases, exercised, elapsed: start.elapsed() })
}

/// Class membership of the oriented reactions, decided from ranks alone.
///
/// Position `p` is identically zero on `Ker L` iff deleting column `p` drops the
/// rank. Two positions carry proportional kernel coordinates iff the kernel
/// projects onto them with dimension one, i.e. `2 - rank(L) + rank(L without both) = 1`.
pub fn oracle_partition(l: &[Vec<Q>]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let n = l.first().map_or(0, Vec::len);
    let full = oracle_rank(l);
    let zero_pos: Vec<usize> = (0..n).filter(|&p| oracle_rank(&columns(l, |j| j != p)) < full).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for p in (0..n).filter(|p| !zero_pos.contains(p)) {
        let found = classes.iter_mut().find(|class| {
            let q = class[0];
            let without = oracle_rank(&columns(l, |j| j != p && j != q));
            2 + without - full == 1
        });
        match found {
            Some(class) => class.push(p),
            None => classes.push(vec![p]),
        }
    }
    (zero_pos, classes)
}

/// Equivalence classes agree with the rank oracle on random networks.
pub fn suite_partition(cases: usize, seed: u64) -> SuiteResult {
    let start = Instant::now();
    let mut rng = seeded(seed);
    let mut exercised = 0;
    for case in 0..cases {
        let net = random_network(&mut rng, 4, 8, true);
        let orientation = Orientation::default_for(&net);
        let partition = EquivalencePartition::compute(&net, orientation.clone());
        let m = net.num_species();
        let mut l: Vec<Vec<Q>> = vec![Vec::new(); m];
        for &j in orientation.reactions() {
            let v = net.reaction_vector(j);
            for s in 0..m {
                l[s].push(v[s].clone());
            }
        }
        let (zero_pos, classes) = oracle_partition(&l);
        let at = |p: usize| orientation.reactions()[p];
        let expected_p0: BTreeSet<usize> = zero_pos.iter().map(|&p| at(p)).collect();
        let got_p0: BTreeSet<usize> = partition.p0.iter().copied().collect();
        if expected_p0 != got_p0 {
            return Err(format!("case {case}: P0 {got_p0:?} vs oracle {expected_p0:?}"));
        }
        let expected: BTreeSet<BTreeSet<usize>> =
            classes.iter().map(|c| c.iter().map(|&p| at(p)).collect()).collect();
        let got: BTreeSet<BTreeSet<usize>> =
            partition.classes.iter().map(|c| c.members.iter().copied().collect()).collect();
        if expected != got {
            return Err(format!("case {case}: classes {got:?} vs oracle {expected:?}"));
        }
        if partition.classes.iter().any(|c| c.members.len() > 1) {
            exercised += 1;
        }
        for class in &partition.classes {
            let rep = partition.row(class.representative).expect("representative row");
            for (&j, alpha) in class.members.iter().zip(&class.alphas) {
                let row = partition.row(j).expect("member row");
                let scaled: Vec<Q> = rep.iter().map(|v| v.clone() * alpha.clone()).collect();
                if row != scaled {
                    return Err(format!("case {case}: alpha of {} is wrong", net.reactions()[j].id));
                }
            }
        }
    }
    Ok(SuiteRun { cases, exercised, elapsed: start.elapsed() })
}

/// Shelf rules that follow directly from the definitions, checked without the library.
fn basic_shelf_rules(
    net: &ReactionNetwork,
    fundamental: &FundamentalClasses,
    degenerate: &[bool],
    shelving: &msa_core::msa::Shelving,
) -> Result<(), String> {
    for (class, fc) in fundamental.classes.iter().enumerate() {
        if degenerate[class] {
            continue;
        }
        for &j in &fc.reactions {
            let shelf = shelving.shelf(j).ok_or(format!("{} unshelved", net.reactions()[j].id))?;
            let r = &net.reactions()[j];
            match r.reverse {
                None if shelf != Shelf::Middle => return Err(format!("irreversible {} not in the middle", r.id)),
                Some(k) if fc.reactions.contains(&k) && shelving.shelf(k) != Some(shelf) => {
                    return Err(format!("{} and its reverse on different shelves", r.id))
                }
                _ => {}
            }
            for &k in &fc.reactions {
                if net.reactions()[k].reactant == r.reactant && shelving.shelf(k) != Some(shelf) {
                    return Err(format!("{} and {} share a reactant but not a shelf", r.id, net.reactions()[k].id));
                }
            }
        }
    }
    Ok(())
}

/// Every enumerated shelving passes the full rule checker and the basic rules above.
pub fn suite_shelvings(cases: usize, seed: u64) -> SuiteResult {
    let start = Instant::now();
    let mut rng = seeded(seed);
    let mut exercised = 0;
    for case in 0..cases {
        let net = random_network(&mut rng, 4, 7, true);
        let initial = EquivalencePartition::compute(&net, Orientation::default_for(&net));
        if initial.early_exit(&net).is_some() {
            continue;
        }
        let Some((partition, _)) = realign(&net, initial) else { continue };
        let fundamental = FundamentalClasses::compute(&net, &partition);
        for pattern in enumerate_sign_patterns(&partition).iter().take(20) {
            let degenerate: Vec<bool> = (0..partition.classes.len()).map(|c| pattern.is_degenerate(c)).collect();
            for shelving in Shelvings::new(&net, &partition, &fundamental, pattern).take(50) {
                exercised += 1;
                check_rules(&net, &partition, &fundamental, pattern, &shelving)
                    .map_err(|e| format!("case {case}: {e}"))?;
                basic_shelf_rules(&net, &fundamental, &degenerate, &shelving)
                    .map_err(|e| format!("case {case}: {e}"))?;
            }
        }
    }
    Ok(SuiteRun { cases, exercised, elapsed: start.elapsed() })
}

/// Relative equilibrium residual computed from scratch in floating point.
pub fn float_residual(system: &KineticSystem, k: &[f64], c: &[f64]) -> f64 {
    let net = system.network();
    let m = net.num_species();
    let mut f = vec![0.0; m];
    let mut largest: f64 = 0.0;
    for j in 0..net.num_reactions() {
        let log: f64 = system
            .kinetic_order_row(j)
            .iter()
            .zip(c)
            .map(|(e, x)| to_f64(e) * x.ln())
            .sum();
        let rate = (k[j].ln() + log).exp();
        largest = largest.max(rate.abs());
        let y = net.reactant(j).to_dense(m);
        let y2 = net.product(j).to_dense(m);
        for s in 0..m {
            f[s] += rate * (to_f64(&y2[s]) - to_f64(&y[s]));
        }
    }
    let worst = f.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if largest == 0.0 {
        worst
    } else {
        worst / largest
    }
}

/// Independent acceptance test for a witness.
pub fn witness_holds(system: &KineticSystem, w: &Witness, tol: f64) -> Result<(), String> {
    let m = system.network().num_species();
    if w.c_star.iter().chain(&w.c_double_star).any(|v| !(*v > 0.0)) {
        return Err("nonpositive concentration".into());
    }
    if w.c_star == w.c_double_star {
        return Err("equilibria coincide".into());
    }
    for (label, c) in [("c*", &w.c_star), ("c**", &w.c_double_star)] {
        let r = float_residual(system, &w.k, c);
        if r > tol {
            return Err(format!("residual {r:e} at {label}"));
        }
    }
    if w.k.iter().any(|v| !(*v > 0.0)) {
        return Err("nonpositive rate constant".into());
    }
    let n = system.network().stoichiometric_matrix();
    let mut rows = n.row_vecs();
    for (s, row) in rows.iter_mut().enumerate() {
        row.push(w.sigma[s].clone());
    }
    if oracle_rank(&rows) != oracle_rank(&n.row_vecs()) {
        return Err("sigma outside the stoichiometric subspace".into());
    }
    let scale = w.sigma.iter().map(to_f64).fold(0.0_f64, |acc, v| acc.max(v.abs()));
    for s in 0..m {
        let d = w.c_star[s] - w.c_double_star[s];
        if (d - to_f64(&w.sigma[s])).abs() > tol * scale.max(1.0) {
            return Err(format!("c* - c** differs from sigma at species {s}"));
        }
    }
    Ok(())
}

/// Every witness the engine emits on random systems passes verification.
pub fn suite_witnesses(cases: usize, seed: u64) -> SuiteResult {
    let start = Instant::now();
    let mut rng = seeded(seed);
    let mut exercised = 0;
    for case in 0..cases {
        let net = random_network(&mut rng, 3, 6, true);
        let system = random_rdk(&mut rng, net);
        let options = AnalysisOptions { max_branches: 3_000, ..AnalysisOptions::default() };
        let analysis = analyze(&system, &options).map_err(|e| format!("case {case}: {e}"))?;
        let Some(w) = &analysis.witness else { continue };
        exercised += 1;
        let report = check_witness(&system, w, options.tol).map_err(|e| format!("case {case}: {e}"))?;
        if !report.pass {
            return Err(format!("case {case}: emitted witness fails verification: {report:?}"));
        }
        witness_holds(&system, w, 1e-6).map_err(|e| format!("case {case}: {e}"))?;
    }
    Ok(SuiteRun { cases, exercised, elapsed: start.elapsed() })
}

/// Newton's method on `f(c) = 0` when the stoichiometric subspace is everything.
///
/// Works in log coordinates so iterates stay positive; returns the refined point and
/// its relative residual.
pub fn newton_full_rank(system: &KineticSystem, k: &[f64], start: &[f64], iterations: usize) -> (Vec<f64>, f64) {
    let net = system.network();
    let m = net.num_species();
    let r = net.num_reactions();
    let stoich: Vec<Vec<f64>> = (0..r)
        .map(|j| {
            let y = net.reactant(j).to_dense(m);
            let y2 = net.product(j).to_dense(m);
            (0..m).map(|s| to_f64(&y2[s]) - to_f64(&y[s])).collect()
        })
        .collect();
    let orders: Vec<Vec<f64>> = (0..r).map(|j| system.kinetic_order_row(j).iter().map(to_f64).collect()).collect();
    let mut u: Vec<f64> = start.iter().map(|c| c.ln()).collect();
    for _ in 0..iterations {
        let rates: Vec<f64> = (0..r)
            .map(|j| (k[j].ln() + orders[j].iter().zip(&u).map(|(e, x)| e * x).sum::<f64>()).exp())
            .collect();
        let f: Vec<f64> = (0..m).map(|s| (0..r).map(|j| rates[j] * stoich[j][s]).sum()).collect();
        // d f_s / d u_t = Σ_j rate_j N_sj F_jt
        let mut jac: Vec<Vec<f64>> = (0..m)
            .map(|s| (0..m).map(|t| (0..r).map(|j| rates[j] * stoich[j][s] * orders[j][t]).sum()).collect())
            .collect();
        let mut rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        for c in 0..m {
            let p = (c..m).max_by(|&a, &b| jac[a][c].abs().total_cmp(&jac[b][c].abs())).unwrap();
            jac.swap(c, p);
            rhs.swap(c, p);
            for row in c + 1..m {
                let factor = jac[row][c] / jac[c][c];
                for col in c..m {
                    jac[row][col] -= factor * jac[c][col];
                }
                rhs[row] -= factor * rhs[c];
            }
        }
        let mut step = vec![0.0; m];
        for c in (0..m).rev() {
            let tail: f64 = (c + 1..m).map(|t| jac[c][t] * step[t]).sum();
            step[c] = (rhs[c] - tail) / jac[c][c];
        }
        for (x, d) in u.iter_mut().zip(&step) {
            *x += d;
        }
    }
    let c: Vec<f64> = u.iter().map(|x| x.exp()).collect();
    let residual = float_residual(system, k, &c);
    (c, residual)
}

/// Same span, decided by ranks.
pub fn same_span(a: &[Vec<Q>], b: &[Vec<Q>]) -> bool {
    let mut both = a.to_vec();
    both.extend(b.iter().cloned());
    let ra = if a.is_empty() { 0 } else { oracle_rank(a) };
    let rb = if b.is_empty() { 0 } else { oracle_rank(b) };
    ra == rb && (both.is_empty() || oracle_rank(&both) == ra)
}

/// Parses a decimal literal exactly.
pub fn dec(text: &str) -> Q {
    msa_core::rational::parse_rational(text).expect("decimal literal")
}

pub fn builtin_model(name: &str) -> msa_core::model::Model {
    msa_core::corpus::builtin(name).expect("known builtin").expect("builtin parses")
}

/// Options carrying the model's pinned orientation, if any.
pub fn model_options(model: &msa_core::model::Model) -> AnalysisOptions {
    let mut options = AnalysisOptions::default();
    if let Some(ids) = &model.orientation {
        options.orientation = Some(Orientation::from_ids(model.system.network(), ids).expect("orientation"));
    }
    options
}

pub fn reaction(net: &ReactionNetwork, id: &str) -> usize {
    net.reaction_index(id).unwrap_or_else(|| panic!("no reaction {id}"))
}

/// Partition classes as sets of reaction ids.
pub fn class_ids(net: &ReactionNetwork, partition: &EquivalencePartition) -> BTreeSet<BTreeSet<String>> {
    partition
        .classes
        .iter()
        .map(|c| c.members.iter().map(|&j| net.reactions()[j].id.clone()).collect())
        .collect()
}

/// Re-expresses vectors given per class (keyed by one member id) in the partition's class order.
pub fn per_class(net: &ReactionNetwork, partition: &EquivalencePartition, keyed: &[(&str, Vec<i64>)]) -> Vec<Vec<Q>> {
    let width = keyed[0].1.len();
    let mut out = vec![vec![zero(); partition.classes.len()]; width];
    for (id, values) in keyed {
        let class = partition.class_of(reaction(net, id)).expect("reaction in a class");
        for (k, v) in values.iter().enumerate() {
            out[k][class] = int(*v);
        }
    }
    out
}
