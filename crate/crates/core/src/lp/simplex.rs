//! Revised primal simplex for `max c·x  s.t.  A x <= b, x >= 0` with `b >= 0`.
//!
//! The slack basis is feasible from the start, so no phase one is needed.
//! Columns are sparse; the basis inverse is kept dense and updated by
//! elementary row operations after every pivot. Pricing is Dantzig's rule,
//! switching to Bland's rule during long runs of degenerate pivots.

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-7;
const DEGENERATE_STREAK: usize = 50;
const REFACTOR_EVERY: usize = 200;
const REFACTOR_MAX_ROWS: usize = 800;

/// Sparse column-wise problem data.
#[derive(Debug, Clone)]
pub(crate) struct SparseLp {
    pub num_rows: usize,
    /// `(row, coefficient)` entries of each structural column.
    pub columns: Vec<Vec<(usize, f64)>>,
    pub cost: Vec<f64>,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum SimplexError {
    IterationLimit(usize),
    Unbounded(usize),
    Singular,
    Inaccurate(String),
}

impl std::fmt::Display for SimplexError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SimplexError::IterationLimit(n) => write!(f, "iteration limit {n} reached"),
            SimplexError::Unbounded(j) => write!(f, "unbounded along column {j}"),
            SimplexError::Singular => write!(f, "basis matrix became singular"),
            SimplexError::Inaccurate(msg) => write!(f, "inaccurate solution: {msg}"),
        }
    }
}

pub(crate) struct Outcome {
    pub x: Vec<f64>,
}

struct Tableau<'a> {
    lp: &'a SparseLp,
    m: usize,
    nc: usize,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    binv: Vec<f64>,
    xb: Vec<f64>,
}

impl<'a> Tableau<'a> {
    fn new(lp: &'a SparseLp) -> Self {
        let m = lp.num_rows;
        let nc = lp.columns.len();
        let mut binv = vec![0.0; m * m];
        for r in 0..m {
            binv[r * m + r] = 1.0;
        }
        let mut in_basis = vec![false; nc + m];
        in_basis[nc..].iter_mut().for_each(|b| *b = true);
        Self {
            lp,
            m,
            nc,
            basis: (nc..nc + m).collect(),
            in_basis,
            binv,
            xb: lp.rhs.clone(),
        }
    }

    fn cost(&self, var: usize) -> f64 {
        if var < self.nc {
            self.lp.cost[var]
        } else {
            0.0
        }
    }

    fn duals(&self) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (r, &var) in self.basis.iter().enumerate() {
            let c = self.cost(var);
            if c != 0.0 {
                let row = &self.binv[r * m..(r + 1) * m];
                for (yk, bk) in y.iter_mut().zip(row) {
                    *yk += c * bk;
                }
            }
        }
        y
    }

    fn reduced_cost(&self, var: usize, y: &[f64]) -> f64 {
        if var < self.nc {
            self.lp.cost[var]
                - self.lp.columns[var]
                    .iter()
                    .map(|&(r, a)| a * y[r])
                    .sum::<f64>()
        } else {
            -y[var - self.nc]
        }
    }

    fn entering(&self, y: &[f64], bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for var in 0..self.nc + self.m {
            if self.in_basis[var] {
                continue;
            }
            let d = self.reduced_cost(var, y);
            if d > COST_TOL {
                if bland {
                    return Some(var);
                }
                if best.is_none_or(|(_, bd)| d > bd) {
                    best = Some((var, d));
                }
            }
        }
        best.map(|(v, _)| v)
    }

    fn direction(&self, var: usize) -> Vec<f64> {
        let m = self.m;
        let mut u = vec![0.0; m];
        if var < self.nc {
            for &(r, a) in &self.lp.columns[var] {
                for (i, ui) in u.iter_mut().enumerate() {
                    *ui += self.binv[i * m + r] * a;
                }
            }
        } else {
            let r = var - self.nc;
            for (i, ui) in u.iter_mut().enumerate() {
                *ui = self.binv[i * m + r];
            }
        }
        u
    }

    fn leaving(&self, u: &[f64], bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, &ui) in u.iter().enumerate() {
            if ui <= PIVOT_TOL {
                continue;
            }
            let ratio = self.xb[i].max(0.0) / ui;
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    let better = if ratio < br - 1e-12 {
                        true
                    } else if ratio <= br + 1e-12 {
                        if bland {
                            self.basis[i] < self.basis[bi]
                        } else {
                            ui > u[bi]
                        }
                    } else {
                        false
                    };
                    if better {
                        Some((i, ratio))
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, leave: usize, enter: usize, u: &[f64]) -> f64 {
        let m = self.m;
        let theta = self.xb[leave].max(0.0) / u[leave];
        for (i, &ui) in u.iter().enumerate() {
            if i != leave && ui != 0.0 {
                self.xb[i] -= theta * ui;
                if self.xb[i] < 0.0 && self.xb[i] > -FEAS_TOL {
                    self.xb[i] = 0.0;
                }
            }
        }
        self.xb[leave] = theta;

        let inv = 1.0 / u[leave];
        let pivot_row: Vec<f64> = self.binv[leave * m..(leave + 1) * m]
            .iter()
            .map(|v| v * inv)
            .collect();
        for (i, &ui) in u.iter().enumerate() {
            if i == leave || ui == 0.0 {
                continue;
            }
            let row = &mut self.binv[i * m..(i + 1) * m];
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= ui * p;
            }
        }
        self.binv[leave * m..(leave + 1) * m].copy_from_slice(&pivot_row);

        self.in_basis[self.basis[leave]] = false;
        self.in_basis[enter] = true;
        self.basis[leave] = enter;
        theta
    }

    /// Recomputes the basis inverse and basic values from scratch.
    fn refactor(&mut self) -> Result<(), SimplexError> {
        let m = self.m;
        // Augmented [B | I], Gauss-Jordan with partial pivoting.
        let w = 2 * m;
        let mut a = vec![0.0; m * w];
        for (k, &var) in self.basis.iter().enumerate() {
            if var < self.nc {
                for &(r, coef) in &self.lp.columns[var] {
                    a[r * w + k] = coef;
                }
            } else {
                a[(var - self.nc) * w + k] = 1.0;
            }
        }
        for r in 0..m {
            a[r * w + m + r] = 1.0;
        }
        for col in 0..m {
            let (p, pv) = (col..m)
                .map(|r| (r, a[r * w + col].abs()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .ok_or(SimplexError::Singular)?;
            if pv < 1e-12 {
                return Err(SimplexError::Singular);
            }
            if p != col {
                for k in 0..w {
                    a.swap(p * w + k, col * w + k);
                }
            }
            let inv = 1.0 / a[col * w + col];
            for k in 0..w {
                a[col * w + k] *= inv;
            }
            let prow: Vec<f64> = a[col * w..(col + 1) * w].to_vec();
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = a[r * w + col];
                if f != 0.0 {
                    for k in 0..w {
                        a[r * w + k] -= f * prow[k];
                    }
                }
            }
        }
        for r in 0..m {
            self.binv[r * m..(r + 1) * m].copy_from_slice(&a[r * w + m..(r + 1) * w]);
        }
        for r in 0..m {
            let row = &self.binv[r * m..(r + 1) * m];
            let v: f64 = row.iter().zip(&self.lp.rhs).map(|(b, rhs)| b * rhs).sum();
            self.xb[r] = if v.abs() < 1e-12 { 0.0 } else { v };
        }
        Ok(())
    }

    fn primal(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.nc];
        for (r, &var) in self.basis.iter().enumerate() {
            if var < self.nc {
                x[var] = self.xb[r].max(0.0);
            }
        }
        x
    }

    fn max_row_violation(&self, x: &[f64]) -> f64 {
        let mut lhs = vec![0.0; self.m];
        for (j, col) in self.lp.columns.iter().enumerate() {
            if x[j] != 0.0 {
                for &(r, a) in col {
                    lhs[r] += a * x[j];
                }
            }
        }
        lhs.iter()
            .zip(&self.lp.rhs)
            .map(|(l, b)| l - b)
            .fold(0.0, f64::max)
    }
}

pub(crate) fn maximize(lp: &SparseLp, max_iterations: usize) -> Result<Outcome, SimplexError> {
    debug_assert!(lp.rhs.iter().all(|&b| b >= 0.0));
    let mut tab = Tableau::new(lp);
    if tab.m == 0 || tab.nc == 0 {
        return Ok(Outcome {
            x: vec![0.0; tab.nc],
        });
    }

    let mut degenerate = 0usize;
    let mut since_refactor = 0usize;
    let mut refactored_at_end = false;
    for _ in 0..max_iterations {
        let bland = degenerate >= DEGENERATE_STREAK;
        let y = tab.duals();
        let Some(enter) = tab.entering(&y, bland) else {
            let x = tab.primal();
            let violation = tab.max_row_violation(&x);
            if violation <= FEAS_TOL {
                return Ok(Outcome { x });
            }
            if refactored_at_end {
                return Err(SimplexError::Inaccurate(format!(
                    "row violation {violation:.3e} after refactorization"
                )));
            }
            tab.refactor()?;
            refactored_at_end = true;
            continue;
        };
        let u = tab.direction(enter);
        let Some(leave) = tab.leaving(&u, bland) else {
            return Err(SimplexError::Unbounded(enter));
        };
        let theta = tab.pivot(leave, enter, &u);
        if theta <= 1e-12 {
            degenerate += 1;
        } else {
            degenerate = 0;
        }
        since_refactor += 1;
        if since_refactor >= REFACTOR_EVERY && tab.m <= REFACTOR_MAX_ROWS {
            tab.refactor()?;
            since_refactor = 0;
        }
    }
    Err(SimplexError::IterationLimit(max_iterations))
}
