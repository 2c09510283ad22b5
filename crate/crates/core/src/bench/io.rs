//! Binary containers and CSV reports.
//!
//! Both containers are little-endian: an 8-byte magic (`PODFEM1` or `PODBAS1`
//! followed by a NUL), integer header fields as `u64`, reals as `f64`.
//!
//! ```text
//! PODFEM1  n_x n_y N τ α β  u^0 .. u^N            (each m = n_x·n_y values)
//! PODBAS1  m d l L  λ_1 .. λ_L  ψ_1 .. ψ_d
//! ```

use crate::error::{Error, Result};
use crate::fem::Trajectory;
use crate::pod::PODBasis;
use crate::rom::DiscrepancyReport;
use nalgebra::{DMatrix, DVector};
use std::fmt::Write as _;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

pub const TRAJECTORY_MAGIC: &[u8; 8] = b"PODFEM1\0";
pub const BASIS_MAGIC: &[u8; 8] = b"PODBAS1\0";

/// Header of a persisted trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryHeader {
    /// Interior node counts.
    pub n_x: usize,
    pub n_y: usize,
    pub n_steps: usize,
    pub tau: f64,
    pub alpha: f64,
    pub beta: f64,
}

struct Out<W: Write>(W);

impl<W: Write> Out<W> {
    fn u64(&mut self, v: usize) -> Result<()> {
        Ok(self.0.write_all(&(v as u64).to_le_bytes())?)
    }

    fn f64s(&mut self, vs: &[f64]) -> Result<()> {
        for v in vs {
            self.0.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }
}

struct In<R: Read>(R);

impl<R: Read> In<R> {
    fn bytes8(&mut self) -> Result<[u8; 8]> {
        let mut b = [0u8; 8];
        self.0.read_exact(&mut b).map_err(truncated)?;
        Ok(b)
    }

    fn u64(&mut self) -> Result<usize> {
        let v = u64::from_le_bytes(self.bytes8()?);
        usize::try_from(v).map_err(|_| Error::Format(format!("header value {v} out of range")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.bytes8()?))
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        (0..n).map(|_| self.f64()).collect()
    }

    fn expect_end(&mut self) -> Result<()> {
        let mut b = [0u8; 1];
        match self.0.read(&mut b)? {
            0 => Ok(()),
            _ => Err(Error::Format("trailing bytes after payload".into())),
        }
    }
}

fn truncated(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        Error::Format("file is truncated".into())
    } else {
        Error::Io(e)
    }
}

fn check_magic<R: Read>(r: &mut In<R>, magic: &[u8; 8]) -> Result<()> {
    let got = r.bytes8()?;
    if &got != magic {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&got),
            String::from_utf8_lossy(&magic[..7])
        )));
    }
    Ok(())
}

/// Guards against allocating absurd payloads from a corrupt header.
fn payload_len(parts: &[usize]) -> Result<usize> {
    parts
        .iter()
        .try_fold(1usize, |acc, &p| acc.checked_mul(p))
        .filter(|&n| n <= 1 << 32)
        .ok_or_else(|| Error::Format("header sizes are implausibly large".into()))
}

pub fn write_trajectory(path: &Path, header: &TrajectoryHeader, traj: &Trajectory) -> Result<()> {
    let m = header.n_x * header.n_y;
    if traj.states.len() != header.n_steps + 1 || traj.states.iter().any(|s| s.len() != m) {
        return Err(Error::param("trajectory does not match its header"));
    }
    let mut w = Out(BufWriter::new(std::fs::File::create(path)?));
    w.0.write_all(TRAJECTORY_MAGIC)?;
    w.u64(header.n_x)?;
    w.u64(header.n_y)?;
    w.u64(header.n_steps)?;
    w.f64s(&[header.tau, header.alpha, header.beta])?;
    for s in &traj.states {
        w.f64s(s.as_slice())?;
    }
    w.0.flush()?;
    Ok(())
}

pub fn read_trajectory(path: &Path) -> Result<(TrajectoryHeader, Trajectory)> {
    let mut r = In(BufReader::new(std::fs::File::open(path)?));
    check_magic(&mut r, TRAJECTORY_MAGIC)?;
    let n_x = r.u64()?;
    let n_y = r.u64()?;
    let n_steps = r.u64()?;
    let tau = r.f64()?;
    let alpha = r.f64()?;
    let beta = r.f64()?;
    let m = payload_len(&[n_x, n_y])?;
    payload_len(&[m, n_steps + 1])?;
    let states = (0..=n_steps)
        .map(|_| r.f64s(m).map(DVector::from_vec))
        .collect::<Result<Vec<_>>>()?;
    r.expect_end()?;
    let header = TrajectoryHeader {
        n_x,
        n_y,
        n_steps,
        tau,
        alpha,
        beta,
    };
    Ok((header, Trajectory { tau, states }))
}

pub fn write_basis(path: &Path, basis: &PODBasis) -> Result<()> {
    let mut w = Out(BufWriter::new(std::fs::File::create(path)?));
    w.0.write_all(BASIS_MAGIC)?;
    w.u64(basis.dofs())?;
    w.u64(basis.d())?;
    w.u64(basis.rank)?;
    w.u64(basis.eigenvalues.len())?;
    w.f64s(basis.eigenvalues.as_slice())?;
    w.f64s(basis.psi.as_slice())?;
    w.0.flush()?;
    Ok(())
}

pub fn read_basis(path: &Path) -> Result<PODBasis> {
    let mut r = In(BufReader::new(std::fs::File::open(path)?));
    check_magic(&mut r, BASIS_MAGIC)?;
    let m = r.u64()?;
    let d = r.u64()?;
    let rank = r.u64()?;
    let count = r.u64()?;
    if d > rank || rank > count {
        return Err(Error::Format(format!(
            "inconsistent basis header: d = {d}, rank = {rank}, eigenvalue count = {count}"
        )));
    }
    payload_len(&[m, d])?;
    payload_len(&[count])?;
    let eigenvalues = DVector::from_vec(r.f64s(count)?);
    let psi = DMatrix::from_vec(m, d, r.f64s(m * d)?);
    r.expect_end()?;
    Ok(PODBasis {
        psi,
        eigenvalues,
        rank,
        snapshot_count: count,
    })
}

/// Rows (k, λ_k, Σ_{j>k} λ_j) for k = 1..L.
pub fn eigs_csv(values: &[f64]) -> String {
    let mut s = String::from("k,lambda,tail_sum\n");
    for k in 0..values.len() {
        let tail = values[k + 1..].iter().fold(0.0, |acc, v| acc + v);
        let _ = writeln!(s, "{},{:e},{tail:e}", k + 1, values[k]);
    }
    s
}

/// Rows (d, ROM L² error at T, FE L² error at T).
pub fn errors_csv(rows: &[(usize, f64)], fe_error: f64) -> String {
    let mut s = String::from("d,rom_l2_error,fe_l2_error\n");
    for (d, e) in rows {
        let _ = writeln!(s, "{d},{e:e},{fe_error:e}");
    }
    s
}

pub fn discrepancy_csv(report: &DiscrepancyReport) -> String {
    let mut s = String::from("n,t,l2_discrepancy,bound_pod_term,bound_tau_term\n");
    for r in &report.rows {
        let _ = writeln!(
            s,
            "{},{:e},{:e},{:e},{:e}",
            r.n, r.t, r.l2, report.bound_pod_term, report.bound_tau_term
        );
    }
    s
}

pub fn timing_csv(rows: &[(String, f64)]) -> String {
    let mut s = String::from("phase,seconds\n");
    for (phase, secs) in rows {
        let _ = writeln!(s, "{phase},{secs:e}");
    }
    s
}

/// One row per interior dof for each listed step: (n, t, p, q, x, y, u).
pub fn trajectory_csv(header: &TrajectoryHeader, traj: &Trajectory, steps: &[usize]) -> Result<String> {
    let mut s = String::from("n,t,p,q,x,y,u\n");
    let hx = 1.0 / (header.n_x + 1) as f64;
    let hy = 1.0 / (header.n_y + 1) as f64;
    for &n in steps {
        let u = traj
            .states
            .get(n)
            .ok_or_else(|| Error::param(format!("step {n} is beyond N = {}", header.n_steps)))?;
        for q in 0..header.n_y {
            for p in 0..header.n_x {
                let x = (p + 1) as f64 * hx;
                let y = (q + 1) as f64 * hy;
                let _ = writeln!(s, "{n},{:e},{},{},{x:e},{y:e},{:e}", traj.time(n), p + 1, q + 1, u[p + q * header.n_x]);
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trajectory_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.bin");
        let header = TrajectoryHeader {
            n_x: 3,
            n_y: 2,
            n_steps: 2,
            tau: 0.5,
            alpha: 1.5,
            beta: 1.6,
        };
        let traj = Trajectory {
            tau: 0.5,
            states: (0..3).map(|n| DVector::from_fn(6, |i, _| (i * 10 + n) as f64 - 0.25)).collect(),
        };
        write_trajectory(&path, &header, &traj).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(&bytes[..8], TRAJECTORY_MAGIC);
        assert_eq!(bytes.len(), 8 + 6 * 8 + 3 * 6 * 8);
        let (h2, t2) = read_trajectory(&path).unwrap();
        assert_eq!((h2, t2), (header, traj));
    }

    #[test]
    fn corrupt_files_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b.bin");
        std::fs::write(&path, b"PODFEM1\0\x01").unwrap();
        assert!(matches!(read_trajectory(&path), Err(Error::Format(_))));
        std::fs::write(&path, b"NOTMAGIC").unwrap();
        assert!(matches!(read_basis(&path), Err(Error::Format(_))));
    }

    #[test]
    fn csv_shapes() {
        let csv = eigs_csv(&[3.0, 2.0, 1.0]);
        assert_eq!(csv.lines().nth(1), Some("1,3e0,3e0"));
        assert_eq!(csv.lines().nth(3), Some("3,1e0,0e0"));
        assert_eq!(errors_csv(&[(1, 0.5)], 0.25), "d,rom_l2_error,fe_l2_error\n1,5e-1,2.5e-1\n");
    }
}
