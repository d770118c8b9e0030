//! CSV tables and atomic file output.

use std::io::{self, Write};
use std::path::Path;

use photonlab_core::current::CurrentField;
use photonlab_core::medium::LifecycleSample;
use photonlab_core::modes::{ModeAmplitudes, Polarization};
use photonlab_core::synthesis::FieldSnapshot;
use photonlab_core::vector::Vec3;

use crate::units::Scales;

pub const MODES_HEADER: &[&str] = &["kx", "ky", "kz", "lambda", "re", "im"];
pub const FIELDS_HEADER: &[&str] = &[
    "x", "y", "z", "re_Ax", "im_Ax", "re_Ay", "im_Ay", "re_Az", "im_Az", "re_Ex", "im_Ex", "re_Ey", "im_Ey", "re_Ez",
    "im_Ez", "re_Bx", "im_Bx", "re_By", "im_By", "re_Bz", "im_Bz", "re_phi", "im_phi",
];
pub const CURRENT_HEADER: &[&str] = &["t", "x", "y", "z", "rho", "jx", "jy", "jz", "sx", "sy", "sz", "residual"];
pub const LIFECYCLE_HEADER: &[&str] = &["t", "norm", "residual_max", "peak_z"];

/// 17 significant digits, round-trip exact. Negative zero prints as zero.
pub fn fmt_f(v: f64) -> String {
    format!("{:.16e}", v + 0.0)
}

pub fn lambda_label(p: Polarization) -> &'static str {
    match p {
        Polarization::Plus => "+1",
        Polarization::Minus => "-1",
        Polarization::Parallel => "par",
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Creates the directory and proves it is writable before any work starts.
pub fn prepare_dir(dir: &Path) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let probe = tempfile::NamedTempFile::new_in(dir)?;
    probe.close()
}

/// A CSV document under construction.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> io::Result<Table> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).map_err(io::Error::from)?;
        Ok(Table { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> io::Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(io::Error::from)
    }

    pub fn into_bytes(self) -> io::Result<Vec<u8>> {
        self.writer.into_inner().map_err(|e| io::Error::other(e.to_string()))
    }
}

fn push_vec(row: &mut Vec<String>, v: &Vec3, scale: f64) {
    row.extend(v.0.iter().map(|x| fmt_f(x * scale)));
}

/// Every occupied `(k, λ)` amplitude.
pub fn modes_table(m: &ModeAmplitudes, s: &Scales) -> io::Result<Vec<u8>> {
    let mut t = Table::new(MODES_HEADER)?;
    for i in 0..m.len() {
        let k = m.grid().point(i);
        for p in [Polarization::Plus, Polarization::Minus, Polarization::Parallel] {
            let a = m.amplitude(i, p);
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let mut row = Vec::with_capacity(6);
            push_vec(&mut row, &k, s.wavenumber);
            row.push(lambda_label(p).to_string());
            row.push(fmt_f(a.re * s.amplitude));
            row.push(fmt_f(a.im * s.amplitude));
            t.row(row)?;
        }
    }
    t.into_bytes()
}

/// Positive-frequency potentials and fields at one time.
pub fn fields_table(snap: &FieldSnapshot, s: &Scales) -> io::Result<Vec<u8>> {
    let mut t = Table::new(FIELDS_HEADER)?;
    for i in 0..snap.len() {
        let mut row = Vec::with_capacity(FIELDS_HEADER.len());
        push_vec(&mut row, &snap.grid.point(i), s.length);
        for (v, scale) in [(&snap.a_plus[i], s.potential), (&snap.e_plus[i], s.field), (&snap.b_plus[i], s.potential)] {
            for c in v.0 {
                row.push(fmt_f(c.re * scale));
                row.push(fmt_f(c.im * scale));
            }
        }
        row.push(fmt_f(snap.phi_plus[i].re * s.field));
        row.push(fmt_f(snap.phi_plus[i].im * s.field));
        t.row(row)?;
    }
    t.into_bytes()
}

/// Appends one time slice of densities; `helicity` falls back to zeros.
pub fn current_rows(
    t: &mut Table,
    cf: &CurrentField,
    helicity: &[Vec3],
    residual: &[f64],
    s: &Scales,
) -> io::Result<()> {
    for i in 0..cf.rho.len() {
        let mut row = Vec::with_capacity(CURRENT_HEADER.len());
        row.push(fmt_f(cf.time * s.time));
        push_vec(&mut row, &cf.grid.point(i), s.length);
        row.push(fmt_f(cf.rho[i] * s.density));
        push_vec(&mut row, &cf.j[i], s.current);
        push_vec(&mut row, helicity.get(i).unwrap_or(&Vec3::ZERO), s.helicity);
        row.push(fmt_f(residual[i] * s.rate));
        t.row(row)?;
    }
    Ok(())
}

pub fn lifecycle_table(samples: &[LifecycleSample], s: &Scales) -> io::Result<Vec<u8>> {
    let mut t = Table::new(LIFECYCLE_HEADER)?;
    for x in samples {
        t.row([fmt_f(x.t * s.time), fmt_f(x.norm), fmt_f(x.residual_max * s.rate), fmt_f(x.peak_z * s.length)])?;
    }
    t.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_seventeen_digits() {
        assert_eq!(fmt_f(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(fmt_f(-2.5e-300), "-2.5000000000000000e-300");
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.csv");
        write_atomic(&p, b"a\n").unwrap();
        write_atomic(&p, b"b\n").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"b\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn table_header_is_exact() {
        let t = Table::new(LIFECYCLE_HEADER).unwrap();
        assert_eq!(t.into_bytes().unwrap(), b"t,norm,residual_max,peak_z\n");
    }
}
