//! File formats: CSV tables, JSON reports and content digests.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::IoError;
use crate::forward::{MeasurementMeta, PolarField, RingMeasurement};
use crate::spectral::ModalBasis;

/// Hex SHA-256 of a string.
pub fn digest_str(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn file_err(path: &Path) -> impl Fn(std::io::Error) -> IoError + '_ {
    move |source| IoError::File { path: path.display().to_string(), source }
}

fn csv_err(e: csv::Error) -> IoError {
    IoError::Csv(e.to_string())
}

pub fn create_dir(path: &Path) -> Result<(), IoError> {
    fs::create_dir_all(path).map_err(file_err(path))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(file_err(path))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, IoError> {
    let text = fs::read_to_string(path).map_err(file_err(path))?;
    Ok(serde_json::from_str(&text)?)
}

fn writer(path: &Path, header: &[&str]) -> Result<csv::Writer<fs::File>, IoError> {
    let file = fs::File::create(path).map_err(file_err(path))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(header).map_err(csv_err)?;
    Ok(w)
}

fn row(w: &mut csv::Writer<fs::File>, values: &[String]) -> Result<(), IoError> {
    w.write_record(values).map_err(csv_err)
}

/// `n,m,lambda` for every mode of the basis.
pub fn write_eigenvalues(path: &Path, basis: &ModalBasis) -> Result<(), IoError> {
    let mut w = writer(path, &["n", "m", "lambda"])?;
    for class in &basis.classes {
        for p in class {
            row(&mut w, &[p.n.to_string(), p.m.to_string(), p.lambda.to_string()])?;
        }
    }
    w.flush().map_err(file_err(path))
}

/// One `rho,u` file per mode, named `u_n{n}_m{m}.csv`.
pub fn write_eigenfunctions(dir: &Path, basis: &ModalBasis) -> Result<(), IoError> {
    create_dir(dir)?;
    for class in &basis.classes {
        for p in class {
            let path = dir.join(format!("u_n{}_m{}.csv", p.n, p.m));
            let mut w = writer(&path, &["rho", "u"])?;
            for (r, u) in basis.grid.nodes.iter().zip(&p.values) {
                row(&mut w, &[r.to_string(), u.to_string()])?;
            }
            w.flush().map_err(file_err(&path))?;
        }
    }
    Ok(())
}

/// `rho,theta,<value>` for a polar field.
pub fn write_field(path: &Path, field: &PolarField, value_name: &str) -> Result<(), IoError> {
    let mut w = writer(path, &["rho", "theta", value_name])?;
    for (i, r) in field.grid.rho.iter().enumerate() {
        for (j, t) in field.grid.theta.iter().enumerate() {
            row(&mut w, &[r.to_string(), t.to_string(), field.values[i][j].to_string()])?;
        }
    }
    w.flush().map_err(file_err(path))
}

/// JSON sidecar of a measurement file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasurementSidecar {
    #[serde(flatten)]
    pub meta: MeasurementMeta,
    pub radii: usize,
    pub angles: usize,
    pub steps: usize,
    pub config_hash: String,
}

pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Write `radius,theta,time,u` rows plus the JSON sidecar next to it.
pub fn write_measurement(path: &Path, m: &RingMeasurement, config_hash: &str) -> Result<(), IoError> {
    let mut w = writer(path, &["radius", "theta", "time", "u"])?;
    let times = m.times();
    for (i, r) in m.radii.iter().enumerate() {
        for (j, th) in m.angles.iter().enumerate() {
            for (k, t) in times.iter().enumerate() {
                row(&mut w, &[r.to_string(), th.to_string(), t.to_string(), m.u[i][j][k].to_string()])?;
            }
        }
    }
    w.flush().map_err(file_err(path))?;
    let sidecar = MeasurementSidecar {
        meta: m.meta.clone(),
        radii: m.radii.len(),
        angles: m.angles.len(),
        steps: m.steps,
        config_hash: config_hash.to_string(),
    };
    write_json(&sidecar_path(path), &sidecar)
}

#[derive(Deserialize)]
struct MeasurementRow {
    radius: f64,
    theta: f64,
    time: f64,
    u: f64,
}

fn key(x: f64) -> u64 {
    x.to_bits()
}

/// Read a measurement CSV and its sidecar.
pub fn read_measurement(path: &Path) -> Result<RingMeasurement, IoError> {
    let file = fs::File::open(path).map_err(file_err(path))?;
    let sidecar: MeasurementSidecar = read_json(&sidecar_path(path))?;
    let mut reader = csv::Reader::from_reader(file);
    let mut radii: Vec<f64> = Vec::new();
    let mut angles: Vec<f64> = Vec::new();
    let mut times: Vec<f64> = Vec::new();
    let (mut ri, mut ai, mut ti) = (BTreeMap::new(), BTreeMap::new(), BTreeMap::new());
    let mut entries = Vec::new();
    for rec in reader.deserialize::<MeasurementRow>() {
        let rec = rec.map_err(csv_err)?;
        let index = |map: &mut BTreeMap<u64, usize>, list: &mut Vec<f64>, v: f64| {
            *map.entry(key(v)).or_insert_with(|| {
                list.push(v);
                list.len() - 1
            })
        };
        let i = index(&mut ri, &mut radii, rec.radius);
        let j = index(&mut ai, &mut angles, rec.theta);
        let k = index(&mut ti, &mut times, rec.time);
        entries.push((i, j, k, rec.u));
    }
    let (nr, na, nt) = (radii.len(), angles.len(), times.len());
    if (nr, na, nt) != (sidecar.radii, sidecar.angles, sidecar.steps) || entries.len() != nr * na * nt {
        return Err(IoError::Csv(format!(
            "{}: expected a complete {} x {} x {} lattice, found {} x {} x {} with {} rows",
            path.display(),
            sidecar.radii,
            sidecar.angles,
            sidecar.steps,
            nr,
            na,
            nt,
            entries.len()
        )));
    }
    let mut u = vec![vec![vec![0.0; nt]; na]; nr];
    for (i, j, k, v) in entries {
        u[i][j][k] = v;
    }
    Ok(RingMeasurement { radii, angles, dt: sidecar.meta.dt, steps: nt, u, meta: sidecar.meta })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest_str("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn measurement_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let m = RingMeasurement {
            radii: vec![0.1, 0.2],
            angles: vec![0.0, 2.0, 4.0],
            dt: 0.5,
            steps: 5,
            u: (0..2)
                .map(|i| (0..3).map(|j| (0..5).map(|k| (i * 100 + j * 10 + k) as f64 / 7.0).collect()).collect())
                .collect(),
            meta: MeasurementMeta {
                n_theta: 1,
                n_rad: 2,
                noise: 0.0,
                seed: 3,
                dt: 0.5,
                params_hash: "x".into(),
                warnings: vec![],
            },
        };
        let path = dir.path().join("m.csv");
        write_measurement(&path, &m, "cfg").unwrap();
        let back = read_measurement(&path).unwrap();
        assert_eq!(back, m);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("radius,theta,time,u\n"));
    }
}
