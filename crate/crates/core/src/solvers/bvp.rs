use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{FracError, Result};
use crate::exact::Interval;
use crate::scalar::Scalar;
use crate::solvers::ode::{integrate_segment, RhsFn, Trajectory};

pub const NEWTON_MAX_ITERATIONS: usize = 50;

/// Two-point boundary value problem for `y' = rhs(t, y)` on `span`.
///
/// Components listed in `known_initial` are fixed at the start, those in
/// `free_initial` are unknowns (starting from `initial_guess`), and the
/// `known_terminal` conditions close the system. `segments > 1` switches
/// from simple to multiple shooting.
#[derive(Clone)]
pub struct BvpProblem<T> {
    pub dimension: usize,
    pub rhs: RhsFn<T>,
    pub span: Interval<T>,
    pub known_initial: Vec<(usize, T)>,
    pub free_initial: Vec<usize>,
    pub known_terminal: Vec<(usize, T)>,
    pub initial_guess: Vec<T>,
    pub segments: usize,
}

impl<T: fmt::Debug> fmt::Debug for BvpProblem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BvpProblem")
            .field("dimension", &self.dimension)
            .field("span", &self.span)
            .field("known_initial", &self.known_initial)
            .field("free_initial", &self.free_initial)
            .field("known_terminal", &self.known_terminal)
            .field("segments", &self.segments)
            .finish()
    }
}

impl<T: Scalar> BvpProblem<T> {
    pub fn validate(&self) -> Result<()> {
        let d = self.dimension;
        if self.known_initial.len() + self.free_initial.len() != d {
            return Err(FracError::InvalidInput(format!(
                "{} known and {} free initial values for dimension {d}",
                self.known_initial.len(),
                self.free_initial.len()
            )));
        }
        if self.known_terminal.len() != self.free_initial.len() {
            return Err(FracError::InvalidInput(format!(
                "{} terminal conditions for {} free initial values",
                self.known_terminal.len(),
                self.free_initial.len()
            )));
        }
        if self.free_initial.len() > 4 {
            return Err(FracError::InvalidInput(format!(
                "at most 4 free initial values, got {}",
                self.free_initial.len()
            )));
        }
        if self.initial_guess.len() != self.free_initial.len() {
            return Err(FracError::InvalidInput(
                "initial guess does not match the free initial values".into(),
            ));
        }
        let mut seen = vec![false; d];
        for &i in self
            .known_initial
            .iter()
            .map(|(i, _)| i)
            .chain(&self.free_initial)
        {
            if i >= d || seen[i] {
                return Err(FracError::InvalidInput(format!(
                    "initial component {i} out of range or repeated"
                )));
            }
            seen[i] = true;
        }
        if self.known_terminal.iter().any(|&(i, _)| i >= d) {
            return Err(FracError::InvalidInput(
                "terminal component out of range".into(),
            ));
        }
        if self.segments == 0 {
            return Err(FracError::InvalidInput(
                "need at least one shooting segment".into(),
            ));
        }
        Ok(())
    }

    fn initial_state(&self, free: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.dimension];
        for &(i, v) in &self.known_initial {
            y[i] = v;
        }
        for (&i, &v) in self.free_initial.iter().zip(free) {
            y[i] = v;
        }
        y
    }
}

#[derive(Debug, Clone)]
pub struct BvpSolution<T> {
    pub trajectory: Trajectory<T>,
    /// Converged values of the free initial components.
    pub free_values: Vec<T>,
    pub iterations: usize,
    /// Max-norm of the shooting residual before each Newton step.
    pub residual_history: Vec<T>,
}

struct Shooter<'a, T> {
    p: &'a BvpProblem<T>,
    nodes: Vec<T>,
    steps: usize,
}

impl<'a, T: Scalar> Shooter<'a, T> {
    fn m(&self) -> usize {
        self.p.free_initial.len()
    }

    fn segments(&self) -> usize {
        self.nodes.len() - 1
    }

    fn start(&self, z: &[T], j: usize) -> Vec<T> {
        let (m, d) = (self.m(), self.p.dimension);
        if j == 0 {
            self.p.initial_state(&z[..m])
        } else {
            z[m + (j - 1) * d..m + j * d].to_vec()
        }
    }

    fn propagate(&self, y0: &[T], j: usize) -> Result<Vec<T>> {
        let traj = integrate_segment(
            &self.p.rhs,
            self.nodes[j],
            self.nodes[j + 1],
            y0,
            self.steps,
        )?;
        Ok(traj.final_state().to_vec())
    }

    /// Writes the residual block fed by segment `j` given its end state.
    fn block(&self, z: &[T], j: usize, end: &[T], out: &mut [T]) {
        let d = self.p.dimension;
        if j + 1 < self.segments() {
            let next = self.start(z, j + 1);
            for i in 0..d {
                out[j * d + i] = end[i] - next[i];
            }
        } else {
            let base = (self.segments() - 1) * d;
            for (r, &(i, v)) in self.p.known_terminal.iter().enumerate() {
                out[base + r] = end[i] - v;
            }
        }
    }

    fn residual(&self, z: &[T]) -> Result<(Vec<T>, Vec<Vec<T>>)> {
        let mut out = vec![T::zero(); z.len()];
        let mut ends = Vec::with_capacity(self.segments());
        for j in 0..self.segments() {
            let end = self.propagate(&self.start(z, j), j)?;
            self.block(z, j, &end, &mut out);
            ends.push(end);
        }
        Ok((out, ends))
    }

    /// Forward differences, re-integrating only the segment each unknown
    /// feeds.
    fn jacobian(&self, z: &[T], f0: &[T]) -> Result<DMatrix<f64>> {
        let (m, d) = (self.m(), self.p.dimension);
        let size = z.len();
        let mut jac = DMatrix::<f64>::zeros(size, size);
        let mut zp = z.to_vec();
        let mut fp = f0.to_vec();
        for col in 0..size {
            let h = T::lit(1e-6) * (T::one() + z[col].abs());
            zp[col] = z[col] + h;
            let j = if col < m { 0 } else { 1 + (col - m) / d };
            // the block of segment j moves with the perturbed start state
            let end = self.propagate(&self.start(&zp, j), j)?;
            self.block(&zp, j, &end, &mut fp);
            // continuity with the previous segment moves with s_j itself
            if j > 0 {
                let i = (col - m) % d;
                let row = (j - 1) * d + i;
                jac[(row, col)] = -1.0;
            }
            let rows = if j + 1 < self.segments() {
                j * d..(j + 1) * d
            } else {
                (self.segments() - 1) * d..size
            };
            for row in rows {
                let v = ((fp[row] - f0[row]) / h).as_f64();
                if !v.is_finite() {
                    return Err(FracError::SingularSystem);
                }
                jac[(row, col)] = v;
                fp[row] = f0[row];
            }
            zp[col] = z[col];
        }
        Ok(jac)
    }

    fn initial_unknowns(&self) -> Vec<T> {
        let (m, d) = (self.m(), self.p.dimension);
        let k = self.segments();
        let y0 = self.p.initial_state(&self.p.initial_guess);
        let mut z = self.p.initial_guess.clone();
        for j in 1..k {
            let w = T::from_usize_lossy(j) / T::from_usize_lossy(k);
            let mut s = y0.clone();
            for &(i, v) in &self.p.known_terminal {
                s[i] = y0[i] + (v - y0[i]) * w;
            }
            z.extend(s);
        }
        debug_assert_eq!(z.len(), m + (k - 1) * d);
        z
    }
}

fn max_norm<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, x| {
        if x.is_finite() {
            acc.max(x.abs())
        } else {
            T::infinity()
        }
    })
}

/// Damped Newton on the (multiple) shooting map with a finite-difference
/// Jacobian. `steps` RK4 steps are spread evenly over the segments.
pub fn solve_bvp_shooting<T: Scalar>(
    p: &BvpProblem<T>,
    steps: usize,
    tol: T,
) -> Result<BvpSolution<T>> {
    p.validate()?;
    if steps < 16 {
        return Err(FracError::InvalidInput(format!(
            "shooting needs at least 16 steps, got {steps}"
        )));
    }
    let k = p.segments;
    let (a, b) = (p.span.a(), p.span.b());
    let nodes: Vec<T> = (0..=k)
        .map(|j| {
            if j == k {
                b
            } else {
                a + (b - a) * T::from_usize_lossy(j) / T::from_usize_lossy(k)
            }
        })
        .collect();
    let shooter = Shooter {
        p,
        nodes,
        steps: (steps / k).max(1),
    };

    let mut z = shooter.initial_unknowns();
    let mut history = Vec::new();
    let (mut f, _) = shooter.residual(&z)?;
    let mut iterations = 0;
    loop {
        let norm = max_norm(&f);
        history.push(norm);
        if norm <= tol {
            break;
        }
        if iterations == NEWTON_MAX_ITERATIONS {
            return Err(FracError::NewtonNonConvergence {
                history: history.iter().map(|v| v.as_f64()).collect(),
            });
        }
        let jac = shooter.jacobian(&z, &f)?;
        let rhs = DVector::from_iterator(f.len(), f.iter().map(|v| -v.as_f64()));
        let delta = jac.lu().solve(&rhs).ok_or(FracError::SingularSystem)?;
        if delta.iter().any(|v| !v.is_finite()) {
            return Err(FracError::SingularSystem);
        }
        let mut lambda = T::one();
        loop {
            let trial: Vec<T> = z
                .iter()
                .zip(delta.iter())
                .map(|(zi, di)| *zi + lambda * T::lit(*di))
                .collect();
            let accepted = match shooter.residual(&trial) {
                Ok((ft, _)) if max_norm(&ft) < norm || lambda < T::lit(1.0 / 1024.0) => Some(ft),
                Err(e) if lambda < T::lit(1.0 / 1024.0) => return Err(e),
                _ => None,
            };
            if let Some(ft) = accepted {
                z = trial;
                f = ft;
                break;
            }
            lambda = lambda * T::lit(0.5);
        }
        iterations += 1;
    }

    let mut t = Vec::new();
    let mut states = Vec::new();
    for j in 0..k {
        let seg = integrate_segment(
            &p.rhs,
            shooter.nodes[j],
            shooter.nodes[j + 1],
            &shooter.start(&z, j),
            shooter.steps,
        )?;
        let skip = usize::from(j > 0);
        t.extend(seg.t.into_iter().skip(skip));
        states.extend(seg.states.into_iter().skip(skip));
    }
    Ok(BvpSolution {
        trajectory: Trajectory { t, states },
        free_values: z[..p.free_initial.len()].to_vec(),
        iterations,
        residual_history: history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn second_order(f: fn(f64) -> f64, b: f64, yb: f64, segments: usize) -> BvpProblem<f64> {
        BvpProblem {
            dimension: 2,
            rhs: Arc::new(move |_, y: &[f64], d: &mut [f64]| {
                d[0] = y[1];
                d[1] = f(y[0]);
            }),
            span: Interval::new(0.0, b).unwrap(),
            known_initial: vec![(0, 0.0)],
            free_initial: vec![1],
            known_terminal: vec![(0, yb)],
            initial_guess: vec![0.0],
            segments,
        }
    }

    #[test]
    fn straight_line() {
        for k in [1, 4] {
            let sol = solve_bvp_shooting(&second_order(|_| 0.0, 1.0, 1.0, k), 64, 1e-10).unwrap();
            assert!((sol.free_values[0] - 1.0).abs() < 1e-8);
            assert!(sol.iterations <= 2);
        }
    }

    #[test]
    fn sine() {
        let half_pi = std::f64::consts::FRAC_PI_2;
        for k in [1, 3] {
            let p = second_order(|y| -y, half_pi, 1.0, k);
            let sol = solve_bvp_shooting(&p, 256, 1e-10).unwrap();
            assert!((sol.free_values[0] - 1.0).abs() < 1e-8);
            assert!(sol.iterations <= 2, "{:?}", sol.residual_history);
            // integrating the returned initial state reproduces the terminal value
            let y0 = p.initial_state(&sol.free_values);
            let traj = integrate_segment(&p.rhs, 0.0, half_pi, &y0, 256).unwrap();
            assert!((traj.final_state()[0] - 1.0).abs() < 1e-8);
            assert_eq!(*sol.trajectory.t.last().unwrap(), half_pi);
            let mid = sol.trajectory.t.len() / 2;
            assert!((sol.trajectory.states[mid][0] - sol.trajectory.t[mid].sin()).abs() < 1e-8);
        }
    }

    #[test]
    fn nonlinear_converges() {
        // y'' = -e^y with homogeneous ends (Bratu, lower branch)
        let p = second_order(|y| -y.exp(), 1.0, 0.0, 2);
        let sol = solve_bvp_shooting(&p, 512, 1e-10).unwrap();
        assert!(*sol.residual_history.last().unwrap() <= 1e-10);
        assert!(sol.trajectory.final_state()[0].abs() < 1e-10);
        assert!(sol.iterations > 1);
    }

    #[test]
    fn malformed_problems() {
        let mut p = second_order(|_| 0.0, 1.0, 1.0, 1);
        p.known_terminal.clear();
        assert!(solve_bvp_shooting(&p, 64, 1e-10).is_err());
        let mut p = second_order(|_| 0.0, 1.0, 1.0, 1);
        p.free_initial = vec![0];
        assert!(solve_bvp_shooting(&p, 64, 1e-10).is_err());
    }
}
