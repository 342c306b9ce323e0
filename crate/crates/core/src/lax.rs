//! Isospectral deformation `D' = [B, D]` of a Dirac operator, `B = d - d*`,
//! where `d` is the degree-raising part of the current `D`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{contract, invalid, Error, Result};
use crate::forms::{Chain, GradedOperator};

/// Asymmetry above this (max-norm) is a contract violation on input.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub dirac: DMatrix<f64>,
}

/// `D = d + b + d*`: strictly degree-raising, degree-preserving and strictly
/// degree-lowering parts.
#[derive(Clone, Debug, PartialEq)]
pub struct Splitting {
    pub raising: DMatrix<f64>,
    pub diagonal: DMatrix<f64>,
    pub lowering: DMatrix<f64>,
}

/// A Lax flow over a fixed grading of the basis.
#[derive(Clone, Debug)]
pub struct LaxFlow {
    degrees: Vec<usize>,
}

impl LaxFlow {
    pub fn new(degrees: Vec<usize>) -> Self {
        LaxFlow { degrees }
    }

    pub fn for_operator(op: &GradedOperator) -> Self {
        Self::new(op.basis().degrees().to_vec())
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn split(&self, d: &DMatrix<f64>) -> Result<Splitting> {
        let n = self.degrees.len();
        if d.nrows() != n || d.ncols() != n {
            return invalid(format!("matrix is {}x{}, basis has {n} elements", d.nrows(), d.ncols()));
        }
        if asymmetry(d) > SYMMETRY_TOLERANCE {
            return contract("matrix is not symmetric");
        }
        let deg = &self.degrees;
        let part = |keep: fn(usize, usize) -> bool| {
            DMatrix::from_fn(n, n, |i, j| if keep(deg[i], deg[j]) { d[(i, j)] } else { 0.0 })
        };
        Ok(Splitting {
            raising: part(|to, from| to > from),
            diagonal: part(|to, from| to == from),
            lowering: part(|to, from| to < from),
        })
    }

    /// `[B, D]` with `B = d - d*`.
    pub fn bracket_field(&self, d: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let s = self.split(d)?;
        Ok(bracket(&s, d))
    }

    fn field_unchecked(&self, d: &DMatrix<f64>) -> DMatrix<f64> {
        let n = self.degrees.len();
        let deg = &self.degrees;
        let raising = DMatrix::from_fn(n, n, |i, j| if deg[i] > deg[j] { d[(i, j)] } else { 0.0 });
        let b = &raising - raising.transpose();
        &b * d - d * &b
    }

    /// Fixed-step classical RK4 from `d0` to `t_end`, keeping every
    /// `stride`-th state and always the last one.
    pub fn integrate(&self, d0: &DMatrix<f64>, t_end: f64, dt: f64, stride: usize) -> Result<Vec<FlowState>> {
        if !(dt > 0.0) || !dt.is_finite() {
            return invalid(format!("step size must be positive, got {dt}"));
        }
        if !(t_end >= 0.0) || !t_end.is_finite() {
            return invalid(format!("end time must be non-negative, got {t_end}"));
        }
        self.split(d0)?;
        let stride = stride.max(1);
        let steps = (t_end / dt).round() as usize;
        let mut d = symmetrize(d0);
        let mut out = vec![FlowState { t: 0.0, dirac: d.clone() }];
        for step in 1..=steps {
            let k1 = self.field_unchecked(&d);
            let k2 = self.field_unchecked(&(&d + &k1 * (dt / 2.0)));
            let k3 = self.field_unchecked(&(&d + &k2 * (dt / 2.0)));
            let k4 = self.field_unchecked(&(&d + &k3 * dt));
            let next = symmetrize(&(&d + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)));
            let t = step as f64 * dt;
            if next.iter().any(|x| !x.is_finite()) {
                return Err(Error::Divergence {
                    t,
                    last_good_t: t - dt,
                    last_good: d.transpose().as_slice().to_vec(),
                });
            }
            d = next;
            if step % stride == 0 || step == steps {
                out.push(FlowState { t, dirac: d.clone() });
            }
        }
        Ok(out)
    }

    /// `max |(d_t)^2|` of the raising part.
    pub fn nilpotency_defect(&self, d: &DMatrix<f64>) -> Result<f64> {
        let s = self.split(d)?;
        Ok(max_abs(&(&s.raising * &s.raising)))
    }

    pub fn diagnostics(&self, s0: &FlowState, s: &FlowState) -> Result<Diagnostics> {
        let split = self.split(&s.dirac)?;
        Ok(Diagnostics {
            t: s.t,
            eigenvalues: sorted_eigenvalues(&s.dirac),
            diagonal_norm: split.diagonal.norm(),
            nilpotency_defect: max_abs(&(&split.raising * &split.raising)),
            drift: spectral_drift(s0, s),
            asymmetry: asymmetry(&s.dirac),
        })
    }
}

fn bracket(s: &Splitting, d: &DMatrix<f64>) -> DMatrix<f64> {
    let b = &s.raising - &s.lowering;
    &b * d - d * &b
}

fn symmetrize(d: &DMatrix<f64>) -> DMatrix<f64> {
    (d + d.transpose()) * 0.5
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    max_abs(&(m - m.transpose()))
}

pub fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut v: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `max_i |λ_i(s1) - λ_i(s0)|` over sorted eigenvalues.
pub fn spectral_drift(s0: &FlowState, s1: &FlowState) -> f64 {
    sorted_eigenvalues(&s0.dirac)
        .iter()
        .zip(sorted_eigenvalues(&s1.dirac))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// `trace(D^m)`.
pub fn power_trace(d: &DMatrix<f64>, m: u32) -> f64 {
    let mut p = DMatrix::identity(d.nrows(), d.ncols());
    for _ in 0..m {
        p = &p * d;
    }
    p.trace()
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostics {
    pub t: f64,
    pub eigenvalues: Vec<f64>,
    /// Frobenius norm of the degree-preserving part `b_t`.
    pub diagonal_norm: f64,
    /// `max |d_t^2|`.
    pub nilpotency_defect: f64,
    pub drift: f64,
    pub asymmetry: f64,
}

/// Writes diagnostics as CSV: `t, lambda_0.., b_norm, d2_norm, drift`.
pub fn write_csv<W: std::io::Write>(rows: &[Diagnostics], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let n = rows.first().map_or(0, |r| r.eigenvalues.len());
    let mut header = vec!["t".to_string()];
    header.extend((0..n).map(|i| format!("lambda_{i}")));
    header.extend(["b_norm", "d2_norm", "drift"].map(String::from));
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.t.to_string()];
        rec.extend(r.eigenvalues.iter().map(|x| x.to_string()));
        rec.push(r.diagonal_norm.to_string());
        rec.push(r.nilpotency_defect.to_string());
        rec.push(r.drift.to_string());
        w.write_record(&rec)?;
    }
    w.flush()
}

#[derive(Clone, Debug, Serialize)]
pub struct StokesProbe {
    pub t: f64,
    /// `<d_t f, A>`
    pub deformed: f64,
    /// `<d_0 f, A>`
    pub undeformed: f64,
}

/// Pairs `d_t f` with a chain, next to the same pairing for the undeformed
/// derivative `d_0` taken from `initial`.
pub fn deformed_stokes_probe(
    flow: &LaxFlow,
    initial: &FlowState,
    state: &FlowState,
    f: &[f64],
    a: &Chain,
) -> Result<StokesProbe> {
    let n = flow.degrees.len();
    if f.len() != n {
        return invalid("form length does not match the basis");
    }
    if let Some((i, _)) = a.iter().find(|&(i, _)| i >= n) {
        return invalid(format!("chain index {i} outside the basis"));
    }
    let pair = |d: &DMatrix<f64>| -> Result<f64> {
        let s = flow.split(d)?;
        let df = &s.raising * nalgebra::DVector::from_column_slice(f);
        Ok(a.iter().map(|(i, c)| df[i] * c as f64).sum())
    };
    Ok(StokesProbe {
        t: state.t,
        deformed: pair(&state.dirac)?,
        undeformed: pair(&initial.dirac)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::generate::{generate, Family};
    use crate::forms::{dirac, exterior_derivative};

    fn initial(family: Family, n: usize) -> (LaxFlow, DMatrix<f64>) {
        let c = generate(family, n, 0).unwrap();
        let d = exterior_derivative(&c);
        let dd = dirac(&d).unwrap();
        (LaxFlow::for_operator(&dd), dd.matrix().to_dense())
    }

    #[test]
    fn split_of_initial_dirac() {
        let c = generate(Family::Cycle, 4, 0).unwrap();
        let d = exterior_derivative(&c);
        let flow = LaxFlow::for_operator(&d);
        let s = flow.split(&dirac(&d).unwrap().matrix().to_dense()).unwrap();
        assert_eq!(s.diagonal.norm(), 0.0);
        assert_eq!(s.raising, d.matrix().to_dense());
        let z = flow.split(&DMatrix::zeros(8, 8)).unwrap();
        assert_eq!(z.raising.norm() + z.diagonal.norm() + z.lowering.norm(), 0.0);
        let mut asym = DMatrix::zeros(8, 8);
        asym[(0, 1)] = 1.0;
        assert!(flow.split(&asym).is_err());
    }

    #[test]
    fn bracket_is_symmetric() {
        let (flow, d0) = initial(Family::Cycle, 4);
        let f = flow.bracket_field(&d0).unwrap();
        assert!(f.norm() > 0.0);
        assert!(asymmetry(&f) < 1e-12);
        let s = flow.split(&d0).unwrap();
        let b = &s.raising - &s.lowering;
        assert_eq!(b.transpose(), -b);
        let (vflow, v0) = initial(Family::Simplex, 1);
        assert_eq!(vflow.bracket_field(&v0).unwrap().norm(), 0.0);
    }

    #[test]
    fn zero_time_and_fixed_point() {
        let (flow, d0) = initial(Family::Simplex, 3);
        let traj = flow.integrate(&d0, 0.0, 0.1, 1).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(traj[0].dirac, d0);
        let flat = DMatrix::from_diagonal_element(7, 7, 0.0);
        let traj = flow.integrate(&flat, 1.0, 0.1, 1).unwrap();
        assert!(traj.iter().all(|s| s.dirac == flat));
        assert!(flow.integrate(&d0, 1.0, 0.0, 1).is_err());
    }

    #[test]
    fn triangle_is_isospectral() {
        let (flow, d0) = initial(Family::Simplex, 3);
        let traj = flow.integrate(&d0, 10.0, 0.01, 100).unwrap();
        let drift = spectral_drift(&traj[0], traj.last().unwrap());
        assert!(drift < 1e-6, "drift {drift}");
        for s in &traj {
            assert!(flow.nilpotency_defect(&s.dirac).unwrap() < 1e-8);
        }
        // trace conservation needs the finer step to reach 1e-7
        for s in &flow.integrate(&d0, 10.0, 0.005, 100).unwrap() {
            for m in 2..=4 {
                let (a, b) = (power_trace(&s.dirac, m), power_trace(&d0, m));
                assert!((a - b).abs() < 1e-7, "m={m} t={} {a} {b}", s.t);
            }
        }
    }

    #[test]
    fn circle_grows_a_diagonal_part() {
        let (flow, d0) = initial(Family::Cycle, 4);
        let traj = flow.integrate(&d0, 1.0, 0.01, 10).unwrap();
        let diag = flow.diagnostics(&traj[0], traj.last().unwrap()).unwrap();
        assert!(diag.diagonal_norm > 1e-3);
        assert!(diag.nilpotency_defect < 1e-8);
    }

    #[test]
    fn stokes_probe_on_a_loop() {
        let c = generate(Family::Cycle, 4, 0).unwrap();
        let d = exterior_derivative(&c);
        let dd = dirac(&d).unwrap();
        let flow = LaxFlow::for_operator(&dd);
        let loop_chain = crate::io::cycle_chain(d.basis(), &[0, 1, 2, 3]).unwrap();
        let traj = flow.integrate(&dd.matrix().to_dense(), 1.0, 0.01, 100).unwrap();
        let f: Vec<f64> = (0..8).map(|i| if i < 4 { (i * i) as f64 } else { 0.0 }).collect();
        let p0 = deformed_stokes_probe(&flow, &traj[0], &traj[0], &f, &loop_chain).unwrap();
        assert!(p0.deformed.abs() < 1e-12);
        let zero = vec![0.0; 8];
        let p1 = deformed_stokes_probe(&flow, &traj[0], traj.last().unwrap(), &zero, &loop_chain).unwrap();
        assert_eq!(p1.deformed, 0.0);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let (flow, d0) = initial(Family::Simplex, 2);
        let traj = flow.integrate(&d0, 0.1, 0.05, 1).unwrap();
        let rows: Vec<_> = traj.iter().map(|s| flow.diagnostics(&traj[0], s).unwrap()).collect();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,lambda_0,lambda_1,lambda_2,b_norm,d2_norm,drift\n"));
        assert_eq!(text.lines().count(), 4);
    }
}
