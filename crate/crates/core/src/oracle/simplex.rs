//! Dense two-phase primal simplex for small LPs.
//!
//! minimize c·x subject to rows (≤, ≥, =), x ≥ 0. Phase one minimizes the sum
//! of artificial variables; phase two optimizes the true costs. Entering
//! columns follow Dantzig's rule until a run of degenerate pivots triggers a
//! permanent switch to Bland's rule. Ratio-test ties prefer the largest pivot
//! element (Bland mode: the smallest basic index).

use crate::error::{Error, Result};
use crate::milp::Sense;

#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub coefs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub costs: Vec<f64>,
    pub rows: Vec<LpRow>,
}

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub max_iterations: usize,
    /// Consecutive degenerate pivots tolerated before Bland's rule.
    pub degenerate_before_bland: usize,
    /// Phase-one objective above this means infeasible.
    pub phase_one_tol: f64,
    pub pivot_tol: f64,
    /// Reduced costs below −this are improving.
    pub optimality_tol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_iterations: 50_000,
            degenerate_before_bland: 1_000,
            phase_one_tol: 1e-7,
            pivot_tol: 1e-9,
            optimality_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { objective: f64, x: Vec<f64> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    m: usize,
    width: usize, // structural + slack + artificial columns, rhs stored after
    a: Vec<f64>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    first_artificial: usize,
    iterations: usize,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * (self.width + 1) + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.a[i * (self.width + 1) + self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width + 1;
        let p = self.at(r, c);
        for v in &mut self.a[r * w..(r + 1) * w] {
            *v /= p;
        }
        self.a[r * w + c] = 1.0;
        let (before, rest) = self.a.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        let eliminate = |row: &mut [f64]| {
            let f = row[c];
            if f != 0.0 {
                for (x, &y) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * y;
                    if x.abs() < 1e-14 {
                        *x = 0.0;
                    }
                }
                row[c] = 0.0;
            }
        };
        for row in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            eliminate(row);
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
        // keep primal values from drifting negative
        let w1 = self.width;
        for i in 0..self.m {
            let v = &mut self.a[i * w + w1];
            if *v < 0.0 && *v > -1e-11 {
                *v = 0.0;
            }
        }
    }

    /// Runs simplex iterations on the current objective row over columns
    /// `0..limit`. Returns false when unbounded.
    fn optimize(&mut self, limit: usize, opts: &SimplexOptions) -> Result<bool> {
        let mut degenerate_run = 0;
        let mut bland = false;
        loop {
            let entering = if bland {
                (0..limit).find(|&j| self.obj[j] < -opts.optimality_tol)
            } else {
                let mut best: Option<(usize, f64)> = None;
                for j in 0..limit {
                    let d = self.obj[j];
                    if d < -opts.optimality_tol && best.is_none_or(|(_, b)| d < b) {
                        best = Some((j, d));
                    }
                }
                best.map(|(j, _)| j)
            };
            let Some(c) = entering else {
                return Ok(true);
            };

            let mut leave: Option<(usize, f64, f64)> = None;
            for i in 0..self.m {
                let a = self.at(i, c);
                if a <= opts.pivot_tol {
                    continue;
                }
                let ratio = self.rhs(i).max(0.0) / a;
                let better = match leave {
                    None => true,
                    Some((li, lr, la)) => {
                        let tie = (ratio - lr).abs() <= 1e-12 * lr.abs().max(1.0);
                        if !tie {
                            ratio < lr
                        } else if bland {
                            self.basis[i] < self.basis[li]
                        } else {
                            a > la
                        }
                    }
                };
                if better {
                    leave = Some((i, ratio, a));
                }
            }
            let Some((r, ratio, _)) = leave else {
                return Ok(false);
            };

            self.iterations += 1;
            if self.iterations > opts.max_iterations {
                return Err(Error::IterationLimit(opts.max_iterations));
            }
            if ratio <= 1e-12 {
                degenerate_run += 1;
                if degenerate_run >= opts.degenerate_before_bland {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, c);
        }
    }
}

type NormalRow = (Vec<(usize, f64)>, Sense, f64);

pub fn solve(lp: &LpProblem, opts: &SimplexOptions) -> Result<LpOutcome> {
    let n = lp.costs.len();
    let m = lp.rows.len();

    // Normalize to nonnegative right-hand sides.
    let rows: Vec<NormalRow> = lp
        .rows
        .iter()
        .map(|r| {
            if r.rhs < 0.0 {
                let flipped = match r.sense {
                    Sense::Le => Sense::Ge,
                    Sense::Ge => Sense::Le,
                    Sense::Eq => Sense::Eq,
                };
                (
                    r.coefs.iter().map(|&(j, a)| (j, -a)).collect(),
                    flipped,
                    -r.rhs,
                )
            } else {
                (r.coefs.clone(), r.sense, r.rhs)
            }
        })
        .collect();

    let n_slack = rows.iter().filter(|r| r.1 != Sense::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Sense::Le).count();
    let first_artificial = n + n_slack;
    let width = first_artificial + n_art;
    let mut t = Tableau {
        m,
        width,
        a: vec![0.0; m * (width + 1)],
        obj: vec![0.0; width + 1],
        basis: vec![0; m],
        first_artificial,
        iterations: 0,
    };
    let w = width + 1;
    let (mut slack, mut art) = (n, first_artificial);
    for (i, (coefs, sense, rhs)) in rows.iter().enumerate() {
        for &(j, a) in coefs {
            t.a[i * w + j] += a;
        }
        t.a[i * w + width] = *rhs;
        match sense {
            Sense::Le => {
                t.a[i * w + slack] = 1.0;
                t.basis[i] = slack;
                slack += 1;
            }
            Sense::Ge => {
                t.a[i * w + slack] = -1.0;
                slack += 1;
                t.a[i * w + art] = 1.0;
                t.basis[i] = art;
                art += 1;
            }
            Sense::Eq => {
                t.a[i * w + art] = 1.0;
                t.basis[i] = art;
                art += 1;
            }
        }
    }

    if n_art > 0 {
        // Phase one: minimize Σ artificials, priced out against the basis.
        for i in 0..m {
            if t.basis[i] >= first_artificial {
                for j in 0..=width {
                    if j < first_artificial || j == width {
                        t.obj[j] -= t.a[i * w + j];
                    }
                }
            }
        }
        t.optimize(width, opts)?;
        let infeasibility = -t.obj[width];
        if infeasibility > opts.phase_one_tol {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive remaining artificials out of the basis where possible.
        for i in 0..m {
            if t.basis[i] >= first_artificial {
                if let Some(j) = (0..first_artificial).find(|&j| t.at(i, j).abs() > opts.pivot_tol) {
                    t.pivot(i, j);
                }
            }
        }
    }

    // Phase two objective row: reduced costs of the true objective.
    t.obj.iter_mut().for_each(|v| *v = 0.0);
    t.obj[..n].copy_from_slice(&lp.costs);
    for i in 0..m {
        let b = t.basis[i];
        let cb = if b < n { lp.costs[b] } else { 0.0 };
        if cb != 0.0 {
            for j in 0..=width {
                t.obj[j] -= cb * t.a[i * w + j];
            }
        }
    }
    if !t.optimize(t.first_artificial, opts)? {
        return Ok(LpOutcome::Unbounded);
    }

    let mut x = vec![0.0; n];
    for i in 0..m {
        if t.basis[i] < n {
            x[t.basis[i]] = t.rhs(i).max(0.0);
        }
    }
    let objective = lp.costs.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpOutcome::Optimal { objective, x })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(coefs: &[(usize, f64)], sense: Sense, rhs: f64) -> LpRow {
        LpRow {
            coefs: coefs.to_vec(),
            sense,
            rhs,
        }
    }

    fn optimum(lp: &LpProblem) -> (f64, Vec<f64>) {
        match solve(lp, &SimplexOptions::default()).unwrap() {
            LpOutcome::Optimal { objective, x } => (objective, x),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y st x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), 36
        let lp = LpProblem {
            costs: vec![-3.0, -5.0],
            rows: vec![
                row(&[(0, 1.0)], Sense::Le, 4.0),
                row(&[(1, 2.0)], Sense::Le, 12.0),
                row(&[(0, 3.0), (1, 2.0)], Sense::Le, 18.0),
            ],
        };
        let (obj, x) = optimum(&lp);
        assert!((obj + 36.0).abs() < 1e-9);
        assert!((x[0] - 2.0).abs() < 1e-9 && (x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_ge_rows() {
        // min x + 2y st x + y = 10, x ≥ 3 (as ≥ row), y ≥ 2 → x=8, y=2, 12
        let lp = LpProblem {
            costs: vec![1.0, 2.0],
            rows: vec![
                row(&[(0, 1.0), (1, 1.0)], Sense::Eq, 10.0),
                row(&[(0, 1.0)], Sense::Ge, 3.0),
                row(&[(1, 1.0)], Sense::Ge, 2.0),
            ],
        };
        let (obj, x) = optimum(&lp);
        assert!((obj - 12.0).abs() < 1e-9);
        assert!((x[0] - 8.0).abs() < 1e-9);
    }

    #[test]
    fn negative_rhs_is_normalized() {
        // -x ≤ -5 ⇔ x ≥ 5
        let lp = LpProblem {
            costs: vec![1.0],
            rows: vec![row(&[(0, -1.0)], Sense::Le, -5.0)],
        };
        assert!((optimum(&lp).0 - 5.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LpProblem {
            costs: vec![1.0],
            rows: vec![
                row(&[(0, 1.0)], Sense::Le, 1.0),
                row(&[(0, 1.0)], Sense::Ge, 2.0),
            ],
        };
        assert_eq!(solve(&lp, &SimplexOptions::default()).unwrap(), LpOutcome::Infeasible);
        let lp = LpProblem {
            costs: vec![-1.0],
            rows: vec![row(&[(0, 1.0)], Sense::Ge, 1.0)],
        };
        assert_eq!(solve(&lp, &SimplexOptions::default()).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let lp = LpProblem {
            costs: vec![1.0, 1.0],
            rows: vec![
                row(&[(0, 1.0), (1, 1.0)], Sense::Eq, 4.0),
                row(&[(0, 2.0), (1, 2.0)], Sense::Eq, 8.0),
            ],
        };
        assert!((optimum(&lp).0 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn iteration_limit_is_an_error() {
        let lp = LpProblem {
            costs: vec![-3.0, -5.0],
            rows: vec![
                row(&[(0, 1.0)], Sense::Le, 4.0),
                row(&[(1, 2.0)], Sense::Le, 12.0),
                row(&[(0, 3.0), (1, 2.0)], Sense::Le, 18.0),
            ],
        };
        let opts = SimplexOptions {
            max_iterations: 1,
            ..Default::default()
        };
        assert!(matches!(solve(&lp, &opts), Err(Error::IterationLimit(1))));
    }

    #[test]
    fn bland_from_the_start_reaches_same_optimum() {
        // Beale's cycling example; Dantzig with naive tie-breaking cycles.
        let lp = LpProblem {
            costs: vec![-0.75, 150.0, -0.02, 6.0],
            rows: vec![
                row(&[(0, 0.25), (1, -60.0), (2, -0.04), (3, 9.0)], Sense::Le, 0.0),
                row(&[(0, 0.5), (1, -90.0), (2, -0.02), (3, 3.0)], Sense::Le, 0.0),
                row(&[(2, 1.0)], Sense::Le, 1.0),
            ],
        };
        for k in [0, 1000] {
            let opts = SimplexOptions {
                degenerate_before_bland: k,
                ..Default::default()
            };
            match solve(&lp, &opts).unwrap() {
                LpOutcome::Optimal { objective, .. } => assert!((objective + 0.05).abs() < 1e-9),
                other => panic!("{other:?}"),
            }
        }
    }
}
