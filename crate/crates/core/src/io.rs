//! On-disk instance format.
//!
//! An instance directory holds `meta.json` plus flat binary matrices:
//! `L.bin`, `S.bin`, `M.bin` as row-major little-endian `f64`, and
//! `omega.bin` as one byte (0/1) per entry, row-major. Round-trips are
//! bit-exact; the SVD factors and measured incoherence are recomputed on
//! load and checked against the stored metadata.

use std::fs;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::matrix::{Mask, Mat};
use crate::model::{incoherence, Dims, Instance, MagnitudeModel};

pub const META_FILE: &str = "meta.json";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct InstanceMeta {
    schema_version: u32,
    m: usize,
    n: usize,
    k: usize,
    r: usize,
    p: f64,
    mu: f64,
    seed: u64,
    magnitude: MagnitudeModel,
}

/// Write a dense matrix as row-major little-endian `f64`.
pub fn write_matrix_bin(mat: &Mat, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    for i in 0..mat.nrows() {
        for j in 0..mat.ncols() {
            w.write_all(&mat[(i, j)].to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Read a dense matrix written by [`write_matrix_bin`].
pub fn read_matrix_bin(path: &Path, rows: usize, cols: usize) -> Result<Mat> {
    let mut r = BufReader::new(fs::File::open(path)?);
    let mut buf = vec![0u8; rows * cols * 8];
    r.read_exact(&mut buf).map_err(|e| {
        CoreError::CorruptData(format!("{}: expected {} bytes: {e}", path.display(), buf.len()))
    })?;
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(CoreError::CorruptData(format!(
            "{}: trailing bytes beyond {rows}x{cols} matrix",
            path.display()
        )));
    }
    let mut mat = Mat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let off = (i * cols + j) * 8;
            mat[(i, j)] = f64::from_le_bytes(buf[off..off + 8].try_into().unwrap());
        }
    }
    Ok(mat)
}

fn write_mask_bin(mask: &Mask, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    for i in 0..mask.nrows() {
        for j in 0..mask.ncols() {
            w.write_all(&[u8::from(mask[(i, j)])])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn read_mask_bin(path: &Path, rows: usize, cols: usize) -> Result<Mask> {
    let mut r = BufReader::new(fs::File::open(path)?);
    let mut buf = vec![0u8; rows * cols];
    r.read_exact(&mut buf).map_err(|e| {
        CoreError::CorruptData(format!("{}: expected {} bytes: {e}", path.display(), buf.len()))
    })?;
    let mut mask = Mask::from_element(rows, cols, false);
    for i in 0..rows {
        for j in 0..cols {
            match buf[i * cols + j] {
                0 => {}
                1 => mask[(i, j)] = true,
                other => {
                    return Err(CoreError::CorruptData(format!(
                        "{}: mask byte {other} at ({i},{j})",
                        path.display()
                    )))
                }
            }
        }
    }
    Ok(mask)
}

/// Serialize an instance into a directory (created if missing).
pub fn save_instance(inst: &Instance, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let meta = InstanceMeta {
        schema_version: SCHEMA_VERSION,
        m: inst.dims.m,
        n: inst.dims.n,
        k: inst.dims.k,
        r: inst.dims.r,
        p: inst.p,
        mu: inst.mu,
        seed: inst.seed,
        magnitude: inst.magnitude,
    };
    let meta_json = serde_json::to_string_pretty(&meta)?;
    fs::write(dir.join(META_FILE), meta_json + "\n")?;
    write_matrix_bin(&inst.l, &dir.join("L.bin"))?;
    write_matrix_bin(&inst.s, &dir.join("S.bin"))?;
    write_matrix_bin(&inst.observed, &dir.join("M.bin"))?;
    write_mask_bin(&inst.omega, &dir.join("omega.bin"))?;
    Ok(())
}

/// Load an instance directory written by [`save_instance`].
///
/// `L`, `S`, `M` and the mask are restored bit-exactly; `U`, `sigma`, `V`
/// and `mu` are recomputed from `L` and validated against the metadata.
pub fn load_instance(dir: &Path) -> Result<Instance> {
    let meta_raw = fs::read_to_string(dir.join(META_FILE))?;
    let meta: InstanceMeta = serde_json::from_str(&meta_raw)?;
    if meta.schema_version != SCHEMA_VERSION {
        return Err(CoreError::CorruptData(format!(
            "unsupported instance schema version {}",
            meta.schema_version
        )));
    }
    let dims = Dims::new(meta.m, meta.n, meta.k, meta.r)?;
    let l = read_matrix_bin(&dir.join("L.bin"), meta.m, meta.n)?;
    let s = read_matrix_bin(&dir.join("S.bin"), meta.m, meta.n)?;
    let observed = read_matrix_bin(&dir.join("M.bin"), meta.m, meta.n)?;
    let omega = read_mask_bin(&dir.join("omega.bin"), meta.m, meta.n)?;

    if observed != &l + &s {
        return Err(CoreError::CorruptData(
            "M.bin does not equal L.bin + S.bin".into(),
        ));
    }
    for ((v, on), idx) in s.iter().zip(omega.iter()).zip(0..) {
        let consistent = if *on { *v != 0.0 } else { *v == 0.0 };
        if !consistent {
            return Err(CoreError::CorruptData(format!(
                "S.bin support disagrees with omega.bin at linear index {idx}"
            )));
        }
    }

    let svd = l
        .clone()
        .try_svd(true, true, f64::EPSILON, 10_000)
        .ok_or(CoreError::SvdFailure {
            rows: meta.m,
            cols: meta.n,
        })?;
    let u = svd.u.expect("compute_u").columns(0, meta.r).into_owned();
    let v = svd
        .v_t
        .expect("compute_v")
        .rows(0, meta.r)
        .transpose();
    let sigma =
        nalgebra::DVector::from_iterator(meta.r, svd.singular_values.iter().take(meta.r).copied());
    if sigma[meta.r - 1] <= 0.0 {
        return Err(CoreError::CorruptData(format!(
            "L.bin has rank below the declared r = {}",
            meta.r
        )));
    }
    let mu = incoherence(&u, &v, meta.m, meta.n, meta.r)?;
    if (mu - meta.mu).abs() > 1e-6 * meta.mu.max(1.0) {
        return Err(CoreError::CorruptData(format!(
            "recomputed incoherence {mu} disagrees with stored {}",
            meta.mu
        )));
    }

    Ok(Instance {
        dims,
        l,
        u,
        sigma,
        v,
        s,
        omega,
        observed,
        mu,
        p: meta.p,
        seed: meta.seed,
        magnitude: meta.magnitude,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::InstanceConfig;

    #[test]
    fn matrix_bin_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.bin");
        let mat = Mat::from_fn(7, 5, |i, j| ((i * 31 + j * 17) as f64).sin() * 1e3);
        write_matrix_bin(&mat, &path).unwrap();
        let back = read_matrix_bin(&path, 7, 5).unwrap();
        assert_eq!(mat, back);
        assert!(read_matrix_bin(&path, 5, 7).is_ok()); // same byte count, caller's shape
        assert!(read_matrix_bin(&path, 7, 6).is_err());
    }

    #[test]
    fn instance_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = InstanceConfig::new(23, 17, 4, 3, 0.12, 77);
        let inst = Instance::generate(&cfg).unwrap();
        save_instance(&inst, dir.path()).unwrap();
        let back = load_instance(dir.path()).unwrap();
        assert_eq!(inst.l, back.l);
        assert_eq!(inst.s, back.s);
        assert_eq!(inst.observed, back.observed);
        assert_eq!(inst.omega, back.omega);
        assert_eq!(inst.dims, back.dims);
        assert_eq!(inst.p, back.p);
        assert_eq!(inst.seed, back.seed);
        assert_eq!(inst.magnitude, back.magnitude);
        // Saving the loaded instance again reproduces identical bytes.
        let dir2 = tempfile::tempdir().unwrap();
        save_instance(&back, dir2.path()).unwrap();
        for f in ["meta.json", "L.bin", "S.bin", "M.bin", "omega.bin"] {
            let a = std::fs::read(dir.path().join(f)).unwrap();
            let b = std::fs::read(dir2.path().join(f)).unwrap();
            assert_eq!(a, b, "{f} differs after round trip");
        }
    }

    #[test]
    fn tampered_sum_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = InstanceConfig::new(8, 8, 2, 2, 0.2, 5);
        let inst = Instance::generate(&cfg).unwrap();
        save_instance(&inst, dir.path()).unwrap();
        let mut l = inst.l.clone();
        l[(0, 0)] += 1.0;
        write_matrix_bin(&l, &dir.path().join("L.bin")).unwrap();
        match load_instance(dir.path()) {
            Err(CoreError::CorruptData(_)) => {}
            other => panic!("expected corrupt-data error, got {other:?}"),
        }
    }
}
