//! CSV tables and plain PGM rasters.

use crate::error::{IsssError, Result};
use crate::geometry::{AmbientBox, PointCloud};
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

/// 17 significant digits, locale independent.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_err(e: csv::Error) -> IsssError {
    IsssError::Io(io::Error::other(e))
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// Header plus rows, to `path` or standard output.
pub fn write_csv(path: Option<&Path>, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink(path)?);
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Where the key/value report of a command goes: `<out>.report.csv` next to
/// the main output, or standard error when writing to standard output.
pub fn write_report(out: Option<&Path>, rows: &[(String, String)]) -> Result<()> {
    match out {
        Some(p) => {
            let mut name = p.as_os_str().to_owned();
            name.push(".report.csv");
            write_csv(Some(&PathBuf::from(name)), &["key", "value"], rows.iter().map(|(k, v)| vec![k.clone(), v.clone()]))
        }
        None => {
            let mut e = io::stderr().lock();
            for (k, v) in rows {
                writeln!(e, "{k}: {v}")?;
            }
            Ok(())
        }
    }
}

/// Coordinates `x1..xd` of every cloud point.
pub fn write_cloud(path: Option<&Path>, cloud: &PointCloud) -> Result<()> {
    let header: Vec<String> = (1..=cloud.dim()).map(|i| format!("x{i}")).collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(path, &header, cloud.points().iter().map(|p| p.coords().iter().map(|&x| num(x)).collect()))
}

/// Grayscale occupancy raster, row 0 at the top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl RasterImage {
    pub fn lit(&self) -> usize {
        self.pixels.iter().filter(|&&p| p > 0).count()
    }

    /// Plain "P2" encoding with maxval 255 and lines under 70 characters.
    pub fn to_pgm(&self) -> String {
        let mut s = format!("P2\n{} {}\n255\n", self.width, self.height);
        for row in self.pixels.chunks(self.width) {
            for line in row.chunks(16) {
                let vals: Vec<String> = line.iter().map(u8::to_string).collect();
                s.push_str(&vals.join(" "));
                s.push('\n');
            }
        }
        s
    }
}

/// Pixel 255 iff its cell of `bbox` holds a cloud point. One-dimensional
/// clouds fill whole columns of the strip. Points on the upper edge of the
/// box land in the last pixel; points outside are dropped.
pub fn render_pgm(cloud: &PointCloud, width: usize, height: usize, bbox: &AmbientBox) -> Result<RasterImage> {
    let d = cloud.dim();
    if d > 2 {
        return Err(IsssError::Unsupported(format!("rendering needs a 1- or 2-dimensional cloud, got {d}")));
    }
    if width == 0 || height == 0 {
        return Err(IsssError::InvalidParameter { name: "width/height", reason: "must be positive".into() });
    }
    crate::geometry::check_same_dim(bbox.dim(), d)?;
    let (lo, hi) = (bbox.lo(), bbox.hi());
    let cell = |x: f64, axis: usize, n: usize| -> Option<usize> {
        let span = hi[axis] - lo[axis];
        if x < lo[axis] || x > hi[axis] {
            return None;
        }
        if span <= 0.0 {
            return Some(0);
        }
        Some((((x - lo[axis]) / span * n as f64).floor() as usize).min(n - 1))
    };
    let mut pixels = vec![0u8; width * height];
    for p in cloud.points() {
        let Some(col) = cell(p[0], 0, width) else { continue };
        if d == 1 {
            for row in 0..height {
                pixels[row * width + col] = 255;
            }
        } else if let Some(r) = cell(p[1], 1, height) {
            pixels[(height - 1 - r) * width + col] = 255;
        }
    }
    Ok(RasterImage { width, height, pixels })
}
