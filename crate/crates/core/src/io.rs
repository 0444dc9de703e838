//! Mesh files, activation logs, SVG slices, statistics CSV and plane lists.
//!
//! Every format starts with a version field. Numbers in JSON use the
//! shortest round-trip representation, so a written mesh loads back with
//! bit-identical coefficients.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::bbform::{TrivariateMap, MAP_COEFFS, MAP_DEGREE};
use crate::bounds::PreparedMap;
use crate::paving::{total_boxes, BoxId};
use crate::sweep::{SliceActivation, SweepStats};
use crate::{Error, Point2, Point3, Result};

pub const FORMAT_VERSION: u32 = 1;

/// Orthonormality tolerance for the load-time rotation.
pub const ROTATION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshFile {
    pub version: u32,
    pub degree: u8,
    /// Row-major rotation applied to every control point at load.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<[f64; 9]>,
    pub maps: Vec<MapRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapRecord {
    pub id: u32,
    /// Control points in canonical order.
    pub coeffs: Vec<[f64; 3]>,
}

impl MeshFile {
    pub fn from_maps(maps: &[TrivariateMap]) -> Self {
        MeshFile {
            version: FORMAT_VERSION,
            degree: MAP_DEGREE,
            rotation: None,
            maps: maps
                .iter()
                .map(|m| MapRecord {
                    id: m.id,
                    coeffs: m.coeffs().iter().map(|p| [p.x, p.y, p.z]).collect(),
                })
                .collect(),
        }
    }

    /// Validated maps with the rotation applied.
    pub fn to_maps(&self) -> Result<Vec<TrivariateMap>> {
        if self.version != FORMAT_VERSION {
            return Err(Error::InvalidMesh(format!("unsupported version {}", self.version)));
        }
        if self.degree != MAP_DEGREE {
            return Err(Error::InvalidMesh(format!("degree must be 3, got {}", self.degree)));
        }
        let rot = match self.rotation {
            Some(r) => {
                let m = Matrix3::from_row_slice(&r);
                let err = (m.transpose() * m - Matrix3::identity()).amax();
                if !(err <= ROTATION_TOL) {
                    return Err(Error::InvalidMesh(format!(
                        "rotation is not orthonormal (max deviation {err:e})"
                    )));
                }
                Some(m)
            }
            None => None,
        };
        self.maps
            .iter()
            .enumerate()
            .map(|(index, rec)| {
                if rec.coeffs.len() != MAP_COEFFS {
                    return Err(Error::InvalidMap {
                        index,
                        id: rec.id,
                        msg: format!("expected {MAP_COEFFS} coefficients, got {}", rec.coeffs.len()),
                    });
                }
                if rec.coeffs.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidMap {
                        index,
                        id: rec.id,
                        msg: "non-finite coefficient".into(),
                    });
                }
                let pts: Vec<Point3> = rec.coeffs.iter().map(|c| Point3::from(*c)).collect();
                let map = TrivariateMap::from_slice(rec.id, &pts)?;
                Ok(match &rot {
                    Some(r) => map.transformed(r, &Point3::zeros()),
                    None => map,
                })
            })
            .collect()
    }
}

fn parse_error(path: &Path, e: serde_json::Error) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    }
}

/// Parses a mesh from JSON text; `path` only labels errors.
pub fn parse_mesh(text: &str, path: &Path) -> Result<Vec<PreparedMap>> {
    let file: MeshFile = serde_json::from_str(text).map_err(|e| parse_error(path, e))?;
    Ok(file.to_maps()?.into_iter().map(PreparedMap::new).collect())
}

/// Loads and prepares a mesh. Offsets are computed after the rotation.
pub fn load_mesh(path: impl AsRef<Path>) -> Result<Vec<PreparedMap>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_mesh(&text, path)
}

pub fn write_mesh(path: impl AsRef<Path>, maps: &[TrivariateMap]) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(&MeshFile::from_maps(maps)).expect("mesh serializes");
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

/// Ascending z values, one or more per line; `#` starts a comment.
pub fn read_planes(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        let mut column = 1;
        for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
            if !tok.is_empty() {
                let z = tok.parse::<f64>().map_err(|e| Error::Parse {
                    path: path.to_path_buf(),
                    line: ln + 1,
                    column,
                    msg: format!("{tok:?}: {e}"),
                })?;
                out.push(z);
            }
            column += tok.len() + 1;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoggedActivation {
    #[serde(rename = "box")]
    pub box_id: BoxId,
    pub order: usize,
    pub polygon: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub segments: Vec<[[f64; 2]; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoggedMap {
    pub map: u32,
    pub activations: Vec<LoggedActivation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoggedPlane {
    pub index: usize,
    pub z0: f64,
    pub maps: Vec<LoggedMap>,
}

/// Activations grouped by plane, then by map, in emission order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActivationLog {
    pub version: u32,
    pub n: u32,
    pub planes: Vec<LoggedPlane>,
}

fn xy(p: &Point2) -> [f64; 2] {
    [p.x, p.y]
}

impl ActivationLog {
    /// Groups records that arrive in sweep order (plane, then map).
    pub fn from_records(n: u32, records: &[SliceActivation]) -> Self {
        let mut planes: Vec<LoggedPlane> = Vec::new();
        for r in records {
            if planes.last().map(|p| p.index) != Some(r.plane_index) {
                planes.push(LoggedPlane {
                    index: r.plane_index,
                    z0: r.z0,
                    maps: Vec::new(),
                });
            }
            let plane = planes.last_mut().expect("just pushed");
            if plane.maps.last().map(|m| m.map) != Some(r.map_id) {
                plane.maps.push(LoggedMap {
                    map: r.map_id,
                    activations: Vec::new(),
                });
            }
            plane.maps.last_mut().expect("just pushed").activations.push(LoggedActivation {
                box_id: r.box_id,
                order: r.order,
                polygon: r.polygon.iter().map(xy).collect(),
                segments: r.segments.iter().map(|s| [xy(&s[0]), xy(&s[1])]).collect(),
            });
        }
        ActivationLog {
            version: FORMAT_VERSION,
            n,
            planes,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("log serializes") + "\n"
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| parse_error(path, e))
    }
}

/// How polygons are filled in the SVG.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ColorMode {
    /// Dark green to yellow along the traversal order within each map.
    #[default]
    Order,
    /// One flat color.
    Plain,
}

fn order_color(t: f64) -> (u8, u8, u8) {
    let t = t.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    (lerp(0.0, 255.0), lerp(90.0, 235.0), lerp(30.0, 40.0))
}

/// SVG of one plane's activations. The image `y` axis points up.
pub fn svg_document(records: &[SliceActivation], mode: ColorMode) -> String {
    let mut count: BTreeMap<u32, usize> = BTreeMap::new();
    for r in records {
        *count.entry(r.map_id).or_default() += 1;
    }
    let pts = records
        .iter()
        .flat_map(|r| r.polygon.iter().chain(r.segments.iter().flatten()));
    let (mut lo, mut hi) = (Point2::repeat(f64::INFINITY), Point2::repeat(f64::NEG_INFINITY));
    for p in pts {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    if records.is_empty() {
        lo = Point2::zeros();
        hi = Point2::repeat(1.0);
    }
    let size = hi - lo;
    let pad = 0.02 * size.x.max(size.y).max(1e-9);
    let stroke = pad / 10.0;
    let mut s = String::new();
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">",
        lo.x - pad,
        -hi.y - pad,
        size.x + 2.0 * pad,
        size.y + 2.0 * pad
    )
    .unwrap();
    writeln!(s, "<!-- mapslice slice format {FORMAT_VERSION} -->").unwrap();
    for r in records {
        let (red, green, blue) = match mode {
            ColorMode::Order => {
                let total = count[&r.map_id];
                order_color(if total > 1 { r.order as f64 / (total - 1) as f64 } else { 0.0 })
            }
            ColorMode::Plain => (60, 140, 60),
        };
        s.push_str("<polygon points=\"");
        for (k, p) in r.polygon.iter().enumerate() {
            if k > 0 {
                s.push(' ');
            }
            write!(s, "{:.6},{:.6}", p.x, -p.y).unwrap();
        }
        writeln!(
            s,
            "\" fill=\"#{red:02x}{green:02x}{blue:02x}\" fill-opacity=\"0.8\" stroke=\"#202020\" stroke-width=\"{stroke:.6}\" data-map=\"{}\" data-box=\"{}\"/>",
            r.map_id, r.box_id
        )
        .unwrap();
    }
    for r in records {
        for seg in &r.segments {
            writeln!(
                s,
                "<line x1=\"{:.6}\" y1=\"{:.6}\" x2=\"{:.6}\" y2=\"{:.6}\" stroke=\"#1030a0\" stroke-width=\"{:.6}\"/>",
                seg[0].x, -seg[0].y, seg[1].x, -seg[1].y, stroke
            )
            .unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_svg(records: &[SliceActivation], path: impl AsRef<Path>, mode: ColorMode) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, svg_document(records, mode)).map_err(|e| Error::io(path, e))
}

/// `x` rounded to 4 significant digits.
pub fn four_significant(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = 3 - x.abs().log10().floor() as i32;
    format!("{:.*}", digits.max(0) as usize, x)
}

pub const STATS_HEADER: &str = "version,plane,z0,n,time_s,boxes_in_intersection,total_boxes,intersect_total_pct,active_maps,cuboid_tests,micro_evaluations";

/// One row per plane; `total_boxes` counts the boxes of all active maps.
pub fn stats_csv(stats: &SweepStats) -> String {
    let per_map = total_boxes(u64::from(stats.n)).unwrap_or(0);
    let mut s = String::from(STATS_HEADER);
    s.push('\n');
    for p in &stats.planes {
        let total = per_map * p.active_maps as u64;
        let pct = if total > 0 {
            four_significant(100.0 * p.activations as f64 / total as f64)
        } else {
            "0".to_string()
        };
        writeln!(
            s,
            "{FORMAT_VERSION},{},{},{},{:.6},{},{},{},{},{},{}",
            p.plane_index,
            p.z0,
            stats.n,
            p.wall_time_s,
            p.activations,
            total,
            pct,
            p.active_maps,
            p.cuboid_tests,
            p.micro_evaluations
        )
        .unwrap();
    }
    s
}

pub fn write_stats(stats: &SweepStats, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, stats_csv(stats)).map_err(|e| Error::io(path, e))
}
