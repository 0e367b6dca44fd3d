//! Exact feasibility for mixed strict / non-strict linear systems.
//!
//! Equalities are eliminated first by parameterising their solution set
//! `x = x_p + B z`. The remaining inequalities in `z` go to a dense two-phase
//! simplex over rationals (Bland's rule, so no cycling). Strict rows are
//! slackened by a shared gap variable `t` which is maximised with `t <= 1`;
//! the strict system is feasible iff the optimal gap is positive.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::RationalMatrix;
use crate::rational::{dot, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Gt => lhs > rhs,
            Relation::Ge => lhs >= rhs,
        }
    }

    pub fn is_strict(self) -> bool {
        matches!(self, Relation::Lt | Relation::Gt)
    }

    /// Relation obtained when both sides are swapped.
    pub fn flipped(self) -> Relation {
        match self {
            Relation::Eq => Relation::Eq,
            Relation::Lt => Relation::Gt,
            Relation::Le => Relation::Ge,
            Relation::Gt => Relation::Lt,
            Relation::Ge => Relation::Le,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// `Σ coeffs · x  (relation)  rhs` over variables identified by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl LinearConstraint {
    /// Merges repeated variables and drops zero coefficients; terms end up sorted by variable.
    pub fn new(
        coeffs: impl IntoIterator<Item = (usize, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) -> Self {
        let mut merged: Vec<(usize, Rational)> = Vec::new();
        let mut all: Vec<(usize, Rational)> = coeffs.into_iter().collect();
        all.sort_by_key(|(v, _)| *v);
        for (v, c) in all {
            match merged.last_mut() {
                Some((last, acc)) if *last == v => *acc += c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Self {
            coeffs: merged,
            relation,
            rhs,
        }
    }

    /// Homogeneous comparison `lhs (relation) rhs` of two linear forms.
    pub fn compare(
        lhs: impl IntoIterator<Item = (usize, Rational)>,
        relation: Relation,
        rhs: impl IntoIterator<Item = (usize, Rational)>,
    ) -> Self {
        let terms = lhs
            .into_iter()
            .chain(rhs.into_iter().map(|(v, c)| (v, -c)));
        Self::new(terms, relation, Rational::zero())
    }

    pub fn lhs_value(&self, x: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .fold(Rational::zero(), |acc, (v, c)| acc + c * &x[*v])
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        self.relation.holds(&self.lhs_value(x), &self.rhs)
    }

    pub fn max_var(&self) -> Option<usize> {
        self.coeffs.iter().map(|(v, _)| *v).max()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeasibilityResult {
    Feasible(Vec<Rational>),
    Infeasible,
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible(_))
    }

    pub fn sample(&self) -> Option<&[Rational]> {
        match self {
            FeasibilityResult::Feasible(x) => Some(x),
            FeasibilityResult::Infeasible => None,
        }
    }

    pub fn into_sample(self) -> Option<Vec<Rational>> {
        match self {
            FeasibilityResult::Feasible(x) => Some(x),
            FeasibilityResult::Infeasible => None,
        }
    }
}

/// Decides the system exactly; a feasible answer carries a rational witness point that
/// satisfies every constraint (strict ones strictly).
pub fn solve_feasibility(num_vars: usize, constraints: &[LinearConstraint]) -> FeasibilityResult {
    assert!(
        constraints
            .iter()
            .all(|c| c.max_var().is_none_or(|v| v < num_vars)),
        "constraint references a variable outside 0..{num_vars}"
    );

    let (equalities, inequalities): (Vec<&LinearConstraint>, Vec<&LinearConstraint>) =
        constraints.iter().partition(|c| c.relation == Relation::Eq);

    // x = particular + basis · z
    let Some((particular, basis)) = solve_equalities(num_vars, &equalities) else {
        return FeasibilityResult::Infeasible;
    };
    let k = basis.len();

    // Rows `coef · z <= bound` or `< bound` after substitution.
    let mut rows: Vec<(Vec<Rational>, Rational, bool)> = Vec::new();
    for c in inequalities {
        let mut dense = vec![Rational::zero(); num_vars];
        for (v, a) in &c.coeffs {
            dense[*v] = a.clone();
        }
        let coef: Vec<Rational> = basis.iter().map(|b| dot(&dense, b)).collect();
        let bound = &c.rhs - dot(&dense, &particular);
        let (coef, bound) = match c.relation {
            Relation::Le | Relation::Lt => (coef, bound),
            Relation::Ge | Relation::Gt => (coef.into_iter().map(|x| -x).collect(), -bound),
            Relation::Eq => unreachable!(),
        };
        let strict = c.relation.is_strict();
        if coef.iter().all(Zero::is_zero) {
            let ok = if strict {
                bound.is_positive()
            } else {
                !bound.is_negative()
            };
            if !ok {
                return FeasibilityResult::Infeasible;
            }
            continue;
        }
        rows.push((coef, bound, strict));
    }

    let z = if rows.is_empty() {
        vec![Rational::zero(); k]
    } else {
        match solve_inequalities(k, &rows) {
            Some(z) => z,
            None => return FeasibilityResult::Infeasible,
        }
    };

    let mut x = particular;
    for (zi, b) in z.iter().zip(&basis) {
        if zi.is_zero() {
            continue;
        }
        for (xv, bv) in x.iter_mut().zip(b) {
            *xv += zi * bv;
        }
    }
    debug_assert!(constraints.iter().all(|c| c.holds(&x)), "sample violates system");
    FeasibilityResult::Feasible(x)
}

/// Returns a particular solution and a kernel basis, or `None` if inconsistent.
fn solve_equalities(
    num_vars: usize,
    equalities: &[&LinearConstraint],
) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    if equalities.is_empty() {
        let basis = (0..num_vars)
            .map(|i| {
                let mut e = vec![Rational::zero(); num_vars];
                e[i] = Rational::one();
                e
            })
            .collect();
        return Some((vec![Rational::zero(); num_vars], basis));
    }
    let mut aug = RationalMatrix::zeros(equalities.len(), num_vars + 1);
    for (i, c) in equalities.iter().enumerate() {
        for (v, a) in &c.coeffs {
            aug[(i, *v)] = a.clone();
        }
        aug[(i, num_vars)] = c.rhs.clone();
    }
    let rref = aug.rref();
    if rref.pivots.last() == Some(&num_vars) {
        return None;
    }
    let mut particular = vec![Rational::zero(); num_vars];
    for (r, &p) in rref.pivots.iter().enumerate() {
        particular[p] = rref.matrix[(r, num_vars)].clone();
    }
    let mut is_pivot = vec![false; num_vars];
    for &p in &rref.pivots {
        is_pivot[p] = true;
    }
    let basis = (0..num_vars)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); num_vars];
            v[free] = Rational::one();
            for (r, &p) in rref.pivots.iter().enumerate() {
                v[p] = -rref.matrix[(r, free)].clone();
            }
            v
        })
        .collect();
    Some((particular, basis))
}

/// Finds `z` (free) with every row satisfied, maximising the strict gap.
fn solve_inequalities(k: usize, rows: &[(Vec<Rational>, Rational, bool)]) -> Option<Vec<Rational>> {
    let any_strict = rows.iter().any(|(_, _, s)| *s);
    // Columns: z+ (k), z- (k), [t], slack per row, [slack for t <= 1], artificials.
    let t_col = any_strict.then_some(2 * k);
    let first_slack = 2 * k + usize::from(any_strict);
    let m = rows.len() + usize::from(any_strict);
    let n_struct = first_slack + m;

    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut b: Vec<Rational> = Vec::with_capacity(m);
    for (i, (coef, bound, strict)) in rows.iter().enumerate() {
        let mut row = vec![Rational::zero(); n_struct];
        for (j, c) in coef.iter().enumerate() {
            row[j] = c.clone();
            row[k + j] = -c.clone();
        }
        if *strict {
            row[t_col.unwrap()] = Rational::one();
        }
        row[first_slack + i] = Rational::one();
        a.push(row);
        b.push(bound.clone());
    }
    if let Some(t) = t_col {
        let mut row = vec![Rational::zero(); n_struct];
        row[t] = Rational::one();
        row[first_slack + rows.len()] = Rational::one();
        a.push(row);
        b.push(Rational::one());
    }

    let mut tab = Tableau::new(a, b, first_slack);
    if !tab.phase_one() {
        return None;
    }
    if let Some(t) = t_col {
        let mut objective = vec![Rational::zero(); tab.cols()];
        objective[t] = Rational::one();
        tab.maximize(&objective);
        let x = tab.solution();
        if !x[t].is_positive() {
            return None;
        }
    }
    let x = tab.solution();
    Some((0..k).map(|j| &x[j] - &x[k + j]).collect())
}

/// Dense simplex tableau in canonical form `A x = b`, `x >= 0`, `b >= 0`.
struct Tableau {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    basis: Vec<usize>,
    /// Columns at or beyond this index are artificial and never re-enter after phase one.
    n_real: usize,
}

impl Tableau {
    /// `slack_start`: the identity slack block begins at this column, one slack per row.
    fn new(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>, slack_start: usize) -> Self {
        let m = a.len();
        let n_real = a.first().map_or(0, Vec::len);
        let mut basis = vec![0; m];
        let mut artificial_rows = Vec::new();
        for i in 0..m {
            if b[i].is_negative() {
                for v in a[i].iter_mut() {
                    *v = -v.clone();
                }
                b[i] = -b[i].clone();
                artificial_rows.push(i);
            } else {
                basis[i] = slack_start + i;
            }
        }
        let n_art = artificial_rows.len();
        for row in a.iter_mut() {
            row.extend(std::iter::repeat_n(Rational::zero(), n_art));
        }
        for (j, &i) in artificial_rows.iter().enumerate() {
            a[i][n_real + j] = Rational::one();
            basis[i] = n_real + j;
        }
        Self {
            a,
            b,
            basis,
            n_real,
        }
    }

    fn cols(&self) -> usize {
        self.n_real
    }

    fn total_cols(&self) -> usize {
        self.a.first().map_or(0, Vec::len)
    }

    /// Drives artificial variables to zero; false when the system is infeasible.
    fn phase_one(&mut self) -> bool {
        if self.basis.iter().all(|&j| j < self.n_real) {
            return true;
        }
        let total = self.total_cols();
        let mut objective = vec![Rational::zero(); total];
        for c in objective.iter_mut().skip(self.n_real) {
            *c = -Rational::one();
        }
        self.optimize(&objective, total);
        let infeasible = self
            .basis
            .iter()
            .zip(&self.b)
            .any(|(&j, v)| j >= self.n_real && v.is_positive());
        if infeasible {
            return false;
        }
        // Pivot remaining (zero-valued) artificials out, or drop redundant rows.
        let mut i = 0;
        while i < self.a.len() {
            if self.basis[i] >= self.n_real {
                match (0..self.n_real).find(|&j| !self.a[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.a.remove(i);
                        self.b.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for row in self.a.iter_mut() {
            row.truncate(self.n_real);
        }
        true
    }

    fn maximize(&mut self, objective: &[Rational]) {
        let n = self.n_real;
        self.optimize(objective, n);
    }

    /// Maximises `objective · x` using only the first `allowed` columns as entering
    /// candidates. Every use here is bounded, so unboundedness is not reported.
    fn optimize(&mut self, objective: &[Rational], allowed: usize) {
        loop {
            // Reduced cost of column j: c_j - c_B · A_j.
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut rc = objective[j].clone();
                for (i, &bj) in self.basis.iter().enumerate() {
                    let a = &self.a[i][j];
                    if !a.is_zero() && !objective[bj].is_zero() {
                        rc -= &objective[bj] * a;
                    }
                }
                rc.is_positive()
            });
            let Some(col) = entering else {
                return;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                let a = &self.a[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.b[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((row, _)) = best else {
                // Unbounded direction; callers cap every objective so this is unreachable.
                return;
            };
            self.pivot(row, col);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.a[r][c].recip();
        for v in self.a[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.b[r] *= &inv;
        let pivot_row = self.a[r].clone();
        let pivot_b = self.b[r].clone();
        for i in 0..self.a.len() {
            if i == r || self.a[i][c].is_zero() {
                continue;
            }
            let f = self.a[i][c].clone();
            for (v, p) in self.a[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
            self.b[i] -= &f * &pivot_b;
        }
        self.basis[r] = c;
    }

    fn solution(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.n_real];
        for (i, &j) in self.basis.iter().enumerate() {
            if j < self.n_real {
                x[j] = self.b[i].clone();
            }
        }
        x
    }
}
