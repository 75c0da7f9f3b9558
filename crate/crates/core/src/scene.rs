//! Node clouds, measurement-point files, and synthetic scene generation.
//!
//! A [`NodeCloud`] is the sampled surface the collision detector tests
//! against. It carries a uniform-grid index so box queries only touch the
//! cells they overlap.
//!
//! File formats:
//! - node CSV: `x,y,z` per line, mm, no header
//! - MP CSV: `id,x,y,z,I,J,K` per line
//! - node JSON: `{"element_size": 4.0, "nodes": [{"x":..,"y":..,"z":..}, ..]}`
//!   or a bare array of `{x,y,z}` objects
//! - MP JSON: array of `{"id":..,"x":..,"y":..,"z":..,"I":..,"J":..,"K":..}`
//!
//! Blank lines and lines starting with `#` are ignored in CSV input.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{MeasurementPoint, Point3, UnitVec3};

/// Accepted deviation of an imported normal from unit length.
pub const NORMAL_LENGTH_TOL: f64 = 1e-3;

type CellKey = (i64, i64, i64);

/// Uniform-grid spatial index over node indices.
#[derive(Debug, Clone)]
pub struct GridIndex {
    cell_size: f64,
    cells: HashMap<CellKey, Vec<u32>>,
}

impl GridIndex {
    pub fn build(nodes: &[Point3], cell_size: f64) -> Self {
        assert!(cell_size > 0.0 && cell_size.is_finite(), "cell size must be positive");
        let mut cells: HashMap<CellKey, Vec<u32>> = HashMap::new();
        for (idx, p) in nodes.iter().enumerate() {
            cells.entry(key(p, cell_size)).or_default().push(idx as u32);
        }
        Self { cell_size, cells }
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn occupied_cells(&self) -> usize {
        self.cells.len()
    }

    /// Visits every node index in cells overlapping `[lo, hi]`. Candidates
    /// still need an exact containment test.
    fn for_each_candidate(&self, lo: &Point3, hi: &Point3, mut f: impl FnMut(u32)) {
        let kl = key(lo, self.cell_size);
        let kh = key(hi, self.cell_size);
        let span = |a: i64, b: i64| (b - a + 1).max(0) as u128;
        let n_cells = span(kl.0, kh.0) * span(kl.1, kh.1) * span(kl.2, kh.2);
        if n_cells == 0 {
            return;
        }
        if n_cells <= self.cells.len() as u128 {
            for cx in kl.0..=kh.0 {
                for cy in kl.1..=kh.1 {
                    for cz in kl.2..=kh.2 {
                        if let Some(ids) = self.cells.get(&(cx, cy, cz)) {
                            ids.iter().copied().for_each(&mut f);
                        }
                    }
                }
            }
        } else {
            // Box covers more cells than are occupied: walk occupied cells instead.
            for (k, ids) in &self.cells {
                if (kl.0..=kh.0).contains(&k.0)
                    && (kl.1..=kh.1).contains(&k.1)
                    && (kl.2..=kh.2).contains(&k.2)
                {
                    ids.iter().copied().for_each(&mut f);
                }
            }
        }
    }
}

fn key(p: &Point3, cell: f64) -> CellKey {
    (
        (p.x / cell).floor() as i64,
        (p.y / cell).floor() as i64,
        (p.z / cell).floor() as i64,
    )
}

/// Discretized surface nodes with their spatial index.
#[derive(Debug, Clone)]
pub struct NodeCloud {
    nodes: Vec<Point3>,
    element_size: f64,
    index: GridIndex,
}

impl NodeCloud {
    /// Builds a cloud indexed with cell size `element_size`.
    pub fn new(nodes: Vec<Point3>, element_size: f64) -> Self {
        Self::with_cell_size(nodes, element_size, element_size)
    }

    pub fn with_cell_size(nodes: Vec<Point3>, element_size: f64, cell_size: f64) -> Self {
        let index = GridIndex::build(&nodes, cell_size);
        Self { nodes, element_size, index }
    }

    /// Rebuilds the index with a new cell size, keeping the nodes.
    pub fn reindexed(self, cell_size: f64) -> Self {
        Self::with_cell_size(self.nodes, self.element_size, cell_size)
    }

    pub fn nodes(&self) -> &[Point3] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn element_size(&self) -> f64 {
        self.element_size
    }

    pub fn index(&self) -> &GridIndex {
        &self.index
    }

    /// Indices of all nodes inside the closed box `[lo, hi]`, ascending.
    pub fn query_box(&self, lo: &Point3, hi: &Point3) -> Vec<usize> {
        let mut out = Vec::new();
        self.index.for_each_candidate(lo, hi, |i| {
            if in_box(&self.nodes[i as usize], lo, hi) {
                out.push(i as usize);
            }
        });
        out.sort_unstable();
        out
    }

    /// Calls `f` with every node inside `[lo, hi]`, in no particular order.
    pub fn for_each_in_box(&self, lo: &Point3, hi: &Point3, mut f: impl FnMut(usize, &Point3)) {
        self.index.for_each_candidate(lo, hi, |i| {
            let p = &self.nodes[i as usize];
            if in_box(p, lo, hi) {
                f(i as usize, p);
            }
        });
    }

    /// Reference box query by linear scan.
    pub fn scan_box(&self, lo: &Point3, hi: &Point3) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| in_box(&self.nodes[i], lo, hi)).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(self.nodes.len() * 24);
        for p in &self.nodes {
            let _ = writeln!(s, "{},{},{}", p.x, p.y, p.z);
        }
        s
    }
}

fn in_box(p: &Point3, lo: &Point3, hi: &Point3) -> bool {
    lo.x <= p.x && p.x <= hi.x && lo.y <= p.y && p.y <= hi.y && lo.z <= p.z && p.z <= hi.z
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeFormat {
    Csv,
    Json,
}

impl NodeFormat {
    /// `.json` → JSON, anything else → CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => NodeFormat::Json,
            _ => NodeFormat::Csv,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Records of a CSV file: `(1-based line number, fields)`.
fn csv_records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(n, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((n + 1, line.split(',').map(str::trim).collect()))
        }
    })
}

fn parse_f64(path: &Path, line: usize, field: &str) -> Result<f64> {
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Parse {
            path: path.to_owned(),
            line,
            message: format!("expected a finite number, got `{field}`"),
        }),
    }
}

/// Loads a node cloud; `element_size` is recorded as metadata (JSON input
/// may override it).
pub fn load_nodes(path: &Path, format: NodeFormat, element_size: f64) -> Result<NodeCloud> {
    let text = read(path)?;
    let (nodes, size) = match format {
        NodeFormat::Csv => (parse_nodes_csv(path, &text)?, element_size),
        NodeFormat::Json => {
            #[derive(Deserialize)]
            #[serde(untagged)]
            enum Doc {
                Full { element_size: Option<f64>, nodes: Vec<Point3> },
                Bare(Vec<Point3>),
            }
            let doc: Doc = serde_json::from_str(&text).map_err(|e| Error::json(path, e))?;
            let (nodes, size) = match doc {
                Doc::Full { element_size: s, nodes } => (nodes, s.unwrap_or(element_size)),
                Doc::Bare(nodes) => (nodes, element_size),
            };
            if let Some(i) = nodes.iter().position(|p| !p.is_finite()) {
                return Err(Error::Parse {
                    path: path.to_owned(),
                    line: 0,
                    message: format!("node {i} has a non-finite coordinate"),
                });
            }
            (nodes, size)
        }
    };
    if nodes.is_empty() {
        return Err(Error::Empty(path.to_owned()));
    }
    if !(size > 0.0 && size.is_finite()) {
        return Err(Error::InvalidConfig(format!("element size must be positive, got {size}")));
    }
    Ok(NodeCloud::new(nodes, size))
}

fn parse_nodes_csv(path: &Path, text: &str) -> Result<Vec<Point3>> {
    csv_records(text)
        .map(|(line, f)| {
            if f.len() != 3 {
                return Err(Error::Parse {
                    path: path.to_owned(),
                    line,
                    message: format!("expected 3 fields `x,y,z`, got {}", f.len()),
                });
            }
            Ok(Point3::new(
                parse_f64(path, line, f[0])?,
                parse_f64(path, line, f[1])?,
                parse_f64(path, line, f[2])?,
            ))
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MpRecord {
    id: String,
    x: f64,
    y: f64,
    z: f64,
    #[serde(rename = "I", alias = "i")]
    i: f64,
    #[serde(rename = "J", alias = "j")]
    j: f64,
    #[serde(rename = "K", alias = "k")]
    k: f64,
}

/// Loads measurement points from CSV (or JSON, by extension).
///
/// Normals within [`NORMAL_LENGTH_TOL`] of unit length are renormalized;
/// anything further off is rejected, as are duplicate ids.
pub fn load_mps(path: &Path) -> Result<Vec<MeasurementPoint>> {
    let text = read(path)?;
    let records: Vec<(usize, MpRecord)> = match NodeFormat::from_path(path) {
        NodeFormat::Json => {
            let recs: Vec<MpRecord> =
                serde_json::from_str(&text).map_err(|e| Error::json(path, e))?;
            recs.into_iter().enumerate().map(|(i, r)| (i + 1, r)).collect()
        }
        NodeFormat::Csv => csv_records(&text)
            .map(|(line, f)| {
                if f.len() != 7 {
                    return Err(Error::Parse {
                        path: path.to_owned(),
                        line,
                        message: format!("expected 7 fields `id,x,y,z,I,J,K`, got {}", f.len()),
                    });
                }
                let num = |s| parse_f64(path, line, s);
                Ok((
                    line,
                    MpRecord {
                        id: f[0].to_owned(),
                        x: num(f[1])?,
                        y: num(f[2])?,
                        z: num(f[3])?,
                        i: num(f[4])?,
                        j: num(f[5])?,
                        k: num(f[6])?,
                    },
                ))
            })
            .collect::<Result<_>>()?,
    };
    if records.is_empty() {
        return Err(Error::Empty(path.to_owned()));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(records.len());
    for (line, r) in records {
        let position = Point3::new(r.x, r.y, r.z);
        let raw = Point3::new(r.i, r.j, r.k);
        let length = raw.norm();
        if !position.is_finite() || !((length - 1.0).abs() <= NORMAL_LENGTH_TOL) {
            return Err(Error::NonUnitNormal { path: path.to_owned(), line, id: r.id, length });
        }
        if !seen.insert(r.id.clone()) {
            return Err(Error::DuplicateId(r.id));
        }
        let normal = UnitVec3::from_vec(raw).expect("near-unit vector normalizes");
        out.push(MeasurementPoint::new(r.id, position, normal));
    }
    Ok(out)
}

pub fn mps_to_csv(mps: &[MeasurementPoint]) -> String {
    let mut s = String::new();
    for m in mps {
        let (p, n) = (m.position, m.normal);
        let _ = writeln!(s, "{},{},{},{},{},{},{}", m.id, p.x, p.y, p.z, n.i, n.j, n.k);
    }
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn default_spacing() -> f64 {
    4.0
}

/// Axis-aligned rectangular cut-out in a planar patch's `(u, v)` frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hole {
    pub u: f64,
    pub v: f64,
    pub width: f64,
    pub height: f64,
}

impl Hole {
    /// Strict interior test; the rim stays material.
    pub fn contains(&self, u: f64, v: f64) -> bool {
        self.u < u && u < self.u + self.width && self.v < v && v < self.v + self.height
    }
}

/// A rectangle spanned from `origin` along `u_axis` (width) and `v_axis`
/// (height). The surface normal is `u × v`, or its negation when `flip_normal`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarPatch {
    pub name: String,
    pub origin: Point3,
    pub u_axis: Point3,
    pub v_axis: Point3,
    pub width: f64,
    pub height: f64,
    #[serde(default)]
    pub spacing: Option<f64>,
    #[serde(default)]
    pub holes: Vec<Hole>,
    #[serde(default)]
    pub mp_count: usize,
    #[serde(default)]
    pub flip_normal: bool,
}

impl PlanarPatch {
    pub fn new(
        name: impl Into<String>,
        origin: Point3,
        u_axis: Point3,
        v_axis: Point3,
        width: f64,
        height: f64,
    ) -> Self {
        Self {
            name: name.into(),
            origin,
            u_axis,
            v_axis,
            width,
            height,
            spacing: None,
            holes: Vec::new(),
            mp_count: 0,
            flip_normal: false,
        }
    }

    pub fn spacing(mut self, s: f64) -> Self {
        self.spacing = Some(s);
        self
    }

    pub fn hole(mut self, hole: Hole) -> Self {
        self.holes.push(hole);
        self
    }

    pub fn mps(mut self, n: usize) -> Self {
        self.mp_count = n;
        self
    }

    pub fn flipped(mut self) -> Self {
        self.flip_normal = !self.flip_normal;
        self
    }

    /// Orthonormal `(u, v, normal)`; `v` is re-orthogonalized against `u`.
    fn frame(&self) -> Result<(UnitVec3, UnitVec3, UnitVec3)> {
        let bad = || Error::InvalidScene(format!("`{}`: degenerate axes", self.name));
        let u = UnitVec3::from_vec(self.u_axis).ok_or_else(bad)?;
        let uv = u.as_vec();
        let v = UnitVec3::from_vec(self.v_axis - uv * self.v_axis.dot(&uv)).ok_or_else(bad)?;
        let n = UnitVec3::from_vec(uv.cross(&v.as_vec())).ok_or_else(bad)?;
        Ok((u, v, if self.flip_normal { -n } else { n }))
    }

    /// Surface samples with their normals, skipping hole interiors.
    fn sample(&self, default_spacing: f64) -> Result<Vec<(Point3, UnitVec3)>> {
        let (u, v, n) = self.frame()?;
        let s = self.spacing.unwrap_or(default_spacing);
        let (nu, du) = grid_steps(self.width, s);
        let (nv, dv) = grid_steps(self.height, s);
        let mut out = Vec::with_capacity(nu * nv);
        for a in 0..nu {
            let pu = a as f64 * du;
            for b in 0..nv {
                let pv = b as f64 * dv;
                if self.holes.iter().any(|h| h.contains(pu, pv)) {
                    continue;
                }
                out.push((self.origin.offset(&u, pu).offset(&v, pv), n));
            }
        }
        Ok(out)
    }
}

/// Cylindrical patch: the arc from `start_deg` to `end_deg` about `axis_dir`
/// (angle measured from `ref_dir`), extruded `length` along the axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylindricalPatch {
    pub name: String,
    pub axis_origin: Point3,
    pub axis_dir: Point3,
    pub ref_dir: Point3,
    pub radius: f64,
    pub start_deg: f64,
    pub end_deg: f64,
    pub length: f64,
    #[serde(default)]
    pub spacing: Option<f64>,
    #[serde(default)]
    pub mp_count: usize,
    /// Normals point toward the axis instead of away from it.
    #[serde(default)]
    pub inward: bool,
}

impl CylindricalPatch {
    fn sample(&self, default_spacing: f64) -> Result<Vec<(Point3, UnitVec3)>> {
        let bad = || Error::InvalidScene(format!("`{}`: degenerate axes", self.name));
        let a = UnitVec3::from_vec(self.axis_dir).ok_or_else(bad)?;
        let av = a.as_vec();
        let r = UnitVec3::from_vec(self.ref_dir - av * self.ref_dir.dot(&av)).ok_or_else(bad)?;
        let w = av.cross(&r.as_vec());
        let s = self.spacing.unwrap_or(default_spacing);
        let sweep = (self.end_deg - self.start_deg).to_radians();
        let (n_arc, d_ang) = grid_steps(sweep * self.radius, s);
        let d_ang = d_ang / self.radius;
        let (n_len, d_len) = grid_steps(self.length, s);
        let mut out = Vec::with_capacity(n_arc * n_len);
        for i in 0..n_arc {
            let th = self.start_deg.to_radians() + i as f64 * d_ang;
            let radial = r.as_vec() * th.cos() + w * th.sin();
            let normal = UnitVec3::from_vec(if self.inward { -radial } else { radial })
                .expect("radial direction is unit length");
            for j in 0..n_len {
                let p = self.axis_origin + av * (j as f64 * d_len) + radial * self.radius;
                out.push((p, normal));
            }
        }
        Ok(out)
    }
}

/// Number of samples and actual step for covering `extent` with steps no
/// larger than `spacing`. Both ends are always sampled.
fn grid_steps(extent: f64, spacing: f64) -> (usize, f64) {
    let intervals = ((extent / spacing) - 1e-9).ceil().max(1.0);
    (intervals as usize + 1, extent / intervals)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Primitive {
    FlatPanel(PlanarPatch),
    CurvedPanel(CylindricalPatch),
    Wall(PlanarPatch),
}

impl Primitive {
    pub fn name(&self) -> &str {
        match self {
            Primitive::FlatPanel(p) | Primitive::Wall(p) => &p.name,
            Primitive::CurvedPanel(c) => &c.name,
        }
    }

    fn mp_count(&self) -> usize {
        match self {
            Primitive::FlatPanel(p) | Primitive::Wall(p) => p.mp_count,
            Primitive::CurvedPanel(c) => c.mp_count,
        }
    }

    fn validate(&self) -> Result<()> {
        let err = |m: &str| Err(Error::InvalidScene(format!("`{}`: {m}", self.name())));
        let positive = |v: f64| v > 0.0 && v.is_finite();
        match self {
            Primitive::FlatPanel(p) | Primitive::Wall(p) => {
                if !positive(p.width) || !positive(p.height) {
                    return err("extents must be positive");
                }
                if p.spacing.is_some_and(|s| !positive(s)) {
                    return err("spacing must be positive");
                }
                if p.holes.iter().any(|h| !positive(h.width) || !positive(h.height)) {
                    return err("hole extents must be positive");
                }
            }
            Primitive::CurvedPanel(c) => {
                if !positive(c.radius) || !positive(c.length) || !(c.end_deg > c.start_deg) {
                    return err("radius, length and sweep must be positive");
                }
                if c.spacing.is_some_and(|s| !positive(s)) {
                    return err("spacing must be positive");
                }
            }
        }
        Ok(())
    }

    fn sample(&self, default_spacing: f64) -> Result<Vec<(Point3, UnitVec3)>> {
        match self {
            Primitive::FlatPanel(p) | Primitive::Wall(p) => p.sample(default_spacing),
            Primitive::CurvedPanel(c) => c.sample(default_spacing),
        }
    }
}

/// Named primitives making up a synthetic scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    /// Default sampling spacing `l` in mm.
    #[serde(default = "default_spacing")]
    pub spacing: f64,
    pub primitives: Vec<Primitive>,
    /// Extra measurement points given explicitly.
    #[serde(default)]
    pub mps: Vec<MeasurementPoint>,
}

impl SceneSpec {
    pub fn new(spacing: f64) -> Self {
        Self { spacing, primitives: Vec::new(), mps: Vec::new() }
    }

    pub fn with(mut self, p: Primitive) -> Self {
        self.primitives.push(p);
        self
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = read(path)?;
        serde_json::from_str(&text).map_err(|e| Error::json(path, e))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.spacing > 0.0 && self.spacing.is_finite()) {
            return Err(Error::InvalidScene("spacing must be positive".into()));
        }
        let mut names = HashSet::new();
        for p in &self.primitives {
            p.validate()?;
            if !names.insert(p.name()) {
                return Err(Error::InvalidScene(format!("duplicate primitive name `{}`", p.name())));
            }
        }
        Ok(())
    }
}

/// Six inward-facing panels enclosing the box `[lo, hi]`.
pub fn closed_box(name: &str, lo: Point3, hi: Point3, spacing: f64) -> Vec<Primitive> {
    let d = hi - lo;
    let x = Point3::new(1., 0., 0.);
    let y = Point3::new(0., 1., 0.);
    let z = Point3::new(0., 0., 1.);
    let face = |tag: &str, o: Point3, u: Point3, v: Point3, w: f64, h: f64, flip: bool| {
        let mut p = PlanarPatch::new(format!("{name}-{tag}"), o, u, v, w, h).spacing(spacing);
        p.flip_normal = flip;
        Primitive::Wall(p)
    };
    vec![
        face("bottom", lo, x, y, d.x, d.y, false),
        face("top", Point3::new(lo.x, lo.y, hi.z), x, y, d.x, d.y, true),
        face("front", lo, x, z, d.x, d.z, true),
        face("back", Point3::new(lo.x, hi.y, lo.z), x, z, d.x, d.z, false),
        face("left", lo, y, z, d.y, d.z, false),
        face("right", Point3::new(hi.x, lo.y, lo.z), y, z, d.y, d.z, true),
    ]
}

/// Samples every primitive and places measurement points.
///
/// Each primitive with `mp_count > 0` gets that many MPs on distinct sampled
/// nodes, drawn with a ChaCha generator seeded from `seed`; ids are
/// `<primitive>-<n>`. Explicit `spec.mps` follow. Output is a pure function
/// of `(spec, seed)`.
pub fn generate_scene(spec: &SceneSpec, seed: u64) -> Result<(NodeCloud, Vec<MeasurementPoint>)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = Vec::new();
    let mut mps = Vec::new();
    for prim in &spec.primitives {
        let samples = prim.sample(spec.spacing)?;
        let want = prim.mp_count();
        if want > samples.len() {
            return Err(Error::InvalidScene(format!(
                "`{}`: {} MPs requested but only {} nodes",
                prim.name(),
                want,
                samples.len()
            )));
        }
        if want > 0 {
            let mut picks = sample(&mut rng, samples.len(), want).into_vec();
            picks.sort_unstable();
            for (n, idx) in picks.into_iter().enumerate() {
                let (p, normal) = samples[idx];
                mps.push(MeasurementPoint::new(format!("{}-{}", prim.name(), n + 1), p, normal));
            }
        }
        nodes.extend(samples.into_iter().map(|(p, _)| p));
    }
    mps.extend(spec.mps.iter().cloned());
    let mut ids = HashSet::new();
    for m in &mps {
        if !ids.insert(m.id.as_str()) {
            return Err(Error::DuplicateId(m.id.clone()));
        }
    }
    Ok((NodeCloud::new(nodes, spec.spacing), mps))
}

/// Paths written by [`write_scene`].
#[derive(Debug, Clone)]
pub struct SceneFiles {
    pub nodes: PathBuf,
    pub mps: PathBuf,
}

pub fn write_scene(cloud: &NodeCloud, mps: &[MeasurementPoint], files: &SceneFiles) -> Result<()> {
    write_file(&files.nodes, &cloud.to_csv())?;
    write_file(&files.mps, &mps_to_csv(mps))
}
