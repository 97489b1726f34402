//! LP relaxation of the discharge scheduling integer program.
//!
//! One variable per `(vehicle, station, time)` with `t` in the vehicle's
//! availability (and, by default, a strictly positive reward). Two row
//! families, all with right-hand side 1:
//!
//! * station capacity: at most one vehicle per `(station, time)`;
//! * recharge window: for every available `t`, the vehicle's variables with
//!   time in `[t, t + C_i]` sum to at most one.

mod simplex;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{is_feasible, Assignment, Instance, Schedule};

pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowKind {
    StationCapacity { station: usize, time: usize },
    RechargeWindow { vehicle: usize, time: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub kind: RowKind,
    /// Indices into [`LpModel::variables`], each with coefficient 1.
    pub vars: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    pub variables: Vec<Assignment>,
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LpOptions {
    /// Keep variables whose reward is zero or negative.
    pub include_nonpositive: bool,
}

pub fn build_lp_relaxation(inst: &Instance) -> LpModel {
    build_lp_relaxation_with(inst, LpOptions::default())
}

pub fn build_lp_relaxation_with(inst: &Instance, opts: LpOptions) -> LpModel {
    let mut variables = Vec::new();
    let mut objective = Vec::new();
    let mut rows = Vec::new();
    let mut station_rows: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();

    for (i, v) in inst.vehicles.iter().enumerate() {
        // Variables of this vehicle in (time, station) order.
        let first = variables.len();
        for &t in &v.availability {
            for j in 0..inst.stations {
                let p = inst.reward(j, t);
                if p > 0.0 || opts.include_nonpositive {
                    station_rows
                        .entry((j, t))
                        .or_default()
                        .push(variables.len());
                    variables.push(Assignment::new(i, j, t));
                    objective.push(p);
                }
            }
        }
        let own = first..variables.len();
        for &t in &v.availability {
            let end = t + v.charge_time;
            let vars: Vec<usize> = own
                .clone()
                .filter(|&k| (t..=end).contains(&variables[k].time))
                .collect();
            if !vars.is_empty() {
                rows.push(LpRow {
                    kind: RowKind::RechargeWindow {
                        vehicle: i,
                        time: t,
                    },
                    vars,
                });
            }
        }
    }
    for ((station, time), vars) in station_rows {
        rows.push(LpRow {
            kind: RowKind::StationCapacity { station, time },
            vars,
        });
    }

    LpModel {
        variables,
        objective,
        rows,
    }
}

impl LpModel {
    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    /// CPLEX LP text format, for cross-checking with external solvers.
    pub fn to_lp_format(&self) -> String {
        let name = |a: &Assignment| format!("x_{}_{}_{}", a.vehicle, a.station, a.time);
        let mut out = String::from("\\ discharge scheduling LP relaxation\nMaximize\n obj:");
        if self.variables.is_empty() {
            out.push_str(" 0");
        }
        for (k, (a, c)) in self.variables.iter().zip(&self.objective).enumerate() {
            let sep = if k == 0 { " " } else { " + " };
            let _ = write!(out, "{sep}{c} {}", name(a));
        }
        out.push_str("\nSubject To\n");
        for row in &self.rows {
            let label = match row.kind {
                RowKind::StationCapacity { station, time } => format!("cap_{station}_{time}"),
                RowKind::RechargeWindow { vehicle, time } => format!("win_{vehicle}_{time}"),
            };
            let terms: Vec<String> = row.vars.iter().map(|&k| name(&self.variables[k])).collect();
            let _ = writeln!(out, " {label}: {} <= 1", terms.join(" + "));
        }
        out.push_str("End\n");
        out
    }

    fn to_sparse(&self) -> simplex::SparseLp {
        let mut columns = vec![Vec::new(); self.variables.len()];
        for (r, row) in self.rows.iter().enumerate() {
            for &k in &row.vars {
                columns[k].push((r, 1.0));
            }
        }
        simplex::SparseLp {
            num_rows: self.rows.len(),
            columns,
            cost: self.objective.clone(),
            rhs: vec![1.0; self.rows.len()],
        }
    }
}

/// Nonzero values of an LP solution and its objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionalSolution {
    /// Sorted by assignment; only strictly positive values are kept.
    pub values: Vec<(Assignment, f64)>,
    pub objective: f64,
}

impl FractionalSolution {
    pub fn zero() -> Self {
        Self {
            values: Vec::new(),
            objective: 0.0,
        }
    }

    pub fn value(&self, a: Assignment) -> f64 {
        self.values
            .binary_search_by(|(b, _)| b.cmp(&a))
            .map(|k| self.values[k].1)
            .unwrap_or(0.0)
    }

    /// `(station, time, x)` for one vehicle.
    pub fn vehicle_values(&self, vehicle: usize) -> Vec<(usize, usize, f64)> {
        let lo = self.values.partition_point(|(a, _)| a.vehicle < vehicle);
        self.values[lo..]
            .iter()
            .take_while(|(a, _)| a.vehicle == vehicle)
            .map(|(a, x)| (a.station, a.time, *x))
            .collect()
    }
}

pub fn solve_lp(model: &LpModel) -> Result<FractionalSolution> {
    if model.is_empty() {
        return Ok(FractionalSolution::zero());
    }
    let sparse = model.to_sparse();
    let limit = 50 * (sparse.num_rows + sparse.columns.len()) + 1_000;
    let outcome = simplex::maximize(&sparse, limit).map_err(|e| Error::Solver(e.to_string()))?;

    let mut kept: Vec<(Assignment, f64, f64)> = model
        .variables
        .iter()
        .zip(&model.objective)
        .zip(&outcome.x)
        .filter(|(_, &x)| x > 1e-12)
        .map(|((a, &p), &x)| (*a, x.min(1.0), p))
        .collect();
    kept.sort_unstable_by_key(|a| a.0);
    let objective = kept.iter().map(|&(_, x, p)| p * x).sum();
    let values = kept.into_iter().map(|(a, x, _)| (a, x)).collect();
    Ok(FractionalSolution { values, objective })
}

/// Builds and solves the relaxation of `inst`.
pub fn lp_upper_bound(inst: &Instance) -> Result<FractionalSolution> {
    inst.ensure_valid()?;
    solve_lp(&build_lp_relaxation(inst))
}

pub fn check_integrality(sol: &FractionalSolution, tol: f64) -> bool {
    sol.values
        .iter()
        .all(|&(_, x)| x.abs() <= tol || (x - 1.0).abs() <= tol)
}

/// Converts an integral LP solution into a schedule.
pub fn round_integral(sol: &FractionalSolution, inst: &Instance, tol: f64) -> Result<Schedule> {
    let mut assignments = Vec::new();
    for &(a, x) in &sol.values {
        if (x - 1.0).abs() <= tol {
            assignments.push(a);
        } else if x.abs() > tol {
            return Err(Error::NonIntegral {
                triple: (a.vehicle, a.station, a.time),
                value: x,
            });
        }
    }
    let sched = Schedule::new(assignments, inst)?;
    match is_feasible(&sched.assignments, inst)? {
        crate::Feasibility::Feasible => Ok(sched),
        crate::Feasibility::Infeasible(c) => Err(Error::Precondition(format!(
            "integral LP solution is not a feasible schedule: {c}"
        ))),
    }
}
