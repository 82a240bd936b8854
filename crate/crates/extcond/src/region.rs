//! Two-dimensional region classification: sweep one or two free coordinates
//! of a dataset over a grid and record, per cell, which conditions hold.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::dataset::{ClassSpec, Dataset, FuncDataset, OpDataset, Tolerance};
use crate::dispatch::{check, ClassName, ClassParams};
use crate::error::{Error, Result};
use crate::strengthened::{alpha_iterate, bounds_bu, SimplexScan};

/// A free scalar in one sample: `f`, or a component of `x`, `g` or `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeCoord {
    F,
    X(usize),
    G(usize),
    T(usize),
}

impl FreeCoord {
    /// Parses markers such as `"f"`, `"g[0]"` or `"t[1]"`.
    pub fn parse(marker: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("free marker `{marker}` is not f, x[i], g[i] or t[i]"));
        if marker == "f" {
            return Ok(FreeCoord::F);
        }
        let (field, rest) = marker.split_at(marker.find('[').ok_or_else(bad)?);
        let index = rest
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .and_then(|i| i.parse::<usize>().ok())
            .ok_or_else(bad)?;
        match field {
            "x" => Ok(FreeCoord::X(index)),
            "g" => Ok(FreeCoord::G(index)),
            "t" => Ok(FreeCoord::T(index)),
            _ => Err(bad()),
        }
    }

    pub fn marker(&self) -> String {
        match self {
            FreeCoord::F => "f".into(),
            FreeCoord::X(i) => format!("x[{i}]"),
            FreeCoord::G(i) => format!("g[{i}]"),
            FreeCoord::T(i) => format!("t[{i}]"),
        }
    }
}

/// One layer of a region scan.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionCondition {
    pub label: String,
    pub spec: ClassSpec,
    pub strengthened: bool,
}

impl RegionCondition {
    pub fn new(label: impl Into<String>, spec: ClassSpec, strengthened: bool) -> Self {
        Self { label: label.into(), spec, strengthened }
    }

    /// Reads `{"class": …, "strengthened": …, "label": …, <class flags>}`.
    fn from_json(value: &Value) -> Result<Self> {
        let mut fields = value
            .as_object()
            .cloned()
            .ok_or_else(|| Error::Parse("each condition must be a JSON object".into()))?;
        let class = match fields.remove("class") {
            Some(Value::String(name)) => ClassName::parse(&name)?,
            _ => return Err(Error::Parse("condition without a string `class`".into())),
        };
        let strengthened = match fields.remove("strengthened") {
            None => false,
            Some(Value::Bool(b)) => b,
            Some(_) => return Err(Error::Parse("`strengthened` must be a boolean".into())),
        };
        let label = match fields.remove("label") {
            None => format!("{class}{}", if strengthened { "+strengthened" } else { "" }),
            Some(Value::String(s)) => s,
            Some(_) => return Err(Error::Parse("`label` must be a string".into())),
        };
        let params: ClassParams =
            serde_json::from_value(Value::Object(fields)).map_err(|e| Error::Parse(format!("condition `{label}`: {e}")))?;
        Ok(Self { label, spec: params.to_spec(class)?, strengthened })
    }
}

/// Base dataset with one or two free coordinates in one sample, axis ranges,
/// grid resolution and the conditions to classify under.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSpec {
    pub base: Dataset,
    pub sample: usize,
    pub free: Vec<FreeCoord>,
    pub ranges: Vec<[f64; 2]>,
    pub resolution: Vec<usize>,
    pub conditions: Vec<RegionCondition>,
    pub tol: Tolerance,
    pub scan: SimplexScan,
}

pub const DEFAULT_RESOLUTION: usize = 400;
const MAX_LAYERS: usize = 64;

impl RegionSpec {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_value(&value)
    }

    /// Parses the dataset schema extended with `"free"` markers on one
    /// sample, plus `"ranges"`, `"resolution"`, `"conditions"` and the
    /// optional `"tol"` and `"subdivisions"`. A free `f` may be omitted from
    /// its sample; free vector components need a placeholder.
    pub fn from_json_value(value: &Value) -> Result<Self> {
        let mut dataset = value.clone();
        let samples = dataset
            .get_mut("samples")
            .and_then(Value::as_array_mut)
            .ok_or_else(|| Error::Parse("missing array field `samples`".into()))?;
        let mut free_sample = None;
        let mut free = Vec::new();
        for (row, s) in samples.iter_mut().enumerate() {
            let Some(obj) = s.as_object_mut() else { continue };
            let Some(markers) = obj.remove("free") else { continue };
            if free_sample.replace(row).is_some() {
                return Err(Error::Validation("only one sample may carry free markers".into()));
            }
            let markers = markers
                .as_array()
                .ok_or_else(|| Error::Parse("`free` must be an array of markers".into()))?;
            for m in markers {
                let m = m.as_str().ok_or_else(|| Error::Parse("free markers must be strings".into()))?;
                free.push(FreeCoord::parse(m)?);
            }
            if free.contains(&FreeCoord::F) && !obj.contains_key("f") {
                obj.insert("f".into(), json!(0.0));
            }
        }
        let sample = free_sample.ok_or_else(|| Error::Validation("no sample carries free markers".into()))?;
        let base = Dataset::from_json_value(&dataset, None)?;

        let numbers = |v: &Value, what: &str| -> Result<Vec<f64>> {
            v.as_array()
                .ok_or_else(|| Error::Parse(format!("{what} must be an array")))?
                .iter()
                .map(|x| x.as_f64().ok_or_else(|| Error::Parse(format!("{what} must hold numbers"))))
                .collect()
        };
        let ranges = value
            .get("ranges")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing array field `ranges`".into()))?
            .iter()
            .map(|r| match numbers(r, "each range")?.as_slice() {
                [lo, hi] => Ok([*lo, *hi]),
                _ => Err(Error::Parse("each range must be [lo, hi]".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        let resolution = match value.get("resolution") {
            None => vec![DEFAULT_RESOLUTION; free.len()],
            Some(Value::Number(n)) => vec![n.as_u64().ok_or_else(|| Error::Parse("bad resolution".into()))? as usize; free.len()],
            Some(r) => numbers(r, "`resolution`")?.into_iter().map(|n| n as usize).collect(),
        };
        let conditions = value
            .get("conditions")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing array field `conditions`".into()))?
            .iter()
            .map(RegionCondition::from_json)
            .collect::<Result<Vec<_>>>()?;
        let tol = match value.get("tol") {
            None => Tolerance::default(),
            Some(t) => Tolerance::uniform(t.as_f64().ok_or_else(|| Error::Parse("`tol` must be a number".into()))?),
        };
        let mut scan = SimplexScan::default();
        if let Some(s) = value.get("subdivisions") {
            scan.subdivisions = s.as_u64().ok_or_else(|| Error::Parse("`subdivisions` must be an integer".into()))? as usize;
        }
        let spec = Self { base, sample, free, ranges, resolution, conditions, tol, scan };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.free.len();
        if !(1..=2).contains(&n) {
            return Err(Error::Validation(format!("expected one or two free coordinates, found {n}")));
        }
        if self.ranges.len() != n || self.resolution.len() != n {
            return Err(Error::Validation("need one range and one resolution per free coordinate".into()));
        }
        if self.free.len() == 2 && self.free[0] == self.free[1] {
            return Err(Error::Validation("free coordinates must differ".into()));
        }
        if self.ranges.iter().flatten().any(|v| !v.is_finite()) || self.ranges.iter().any(|[lo, hi]| lo > hi) {
            return Err(Error::Validation("ranges must be finite with lo <= hi".into()));
        }
        if self.resolution.contains(&0) {
            return Err(Error::Validation("resolution must be positive".into()));
        }
        if self.conditions.is_empty() || self.conditions.len() > MAX_LAYERS {
            return Err(Error::Validation(format!("need between 1 and {MAX_LAYERS} conditions")));
        }
        if self.sample >= self.base.len() {
            return Err(Error::Validation("free sample index out of range".into()));
        }
        let d = self.base.d();
        for c in &self.free {
            let ok = match (c, &self.base) {
                (FreeCoord::F, Dataset::Function(_)) => true,
                (FreeCoord::X(i), _) => *i < d,
                (FreeCoord::G(i), Dataset::Function(_)) | (FreeCoord::T(i), Dataset::Operator(_)) => *i < d,
                _ => false,
            };
            if !ok {
                return Err(Error::Validation(format!("free marker `{}` does not fit a {} dataset in dimension {d}", c.marker(), self.base.kind())));
            }
        }
        for c in &self.conditions {
            if c.spec.kind() != self.base.kind() {
                return Err(Error::KindMismatch { expected: c.spec.kind().to_string(), found: self.base.kind().to_string() });
            }
        }
        Ok(())
    }

    /// The dataset with the free coordinates set to `values`.
    pub fn instantiate(&self, values: &[f64]) -> Result<Dataset> {
        let set = |slot: &mut f64, c: usize| *slot = values[c];
        match &self.base {
            Dataset::Function(ds) => {
                let mut samples = ds.samples().to_vec();
                let s = &mut samples[self.sample];
                for (c, coord) in self.free.iter().enumerate() {
                    match *coord {
                        FreeCoord::F => set(&mut s.f, c),
                        FreeCoord::X(i) => set(&mut s.x[i], c),
                        FreeCoord::G(i) => set(&mut s.g[i], c),
                        FreeCoord::T(_) => unreachable!("validated"),
                    }
                }
                Ok(Dataset::Function(FuncDataset::new(samples)?))
            }
            Dataset::Operator(ds) => {
                let mut samples = ds.samples().to_vec();
                let s = &mut samples[self.sample];
                for (c, coord) in self.free.iter().enumerate() {
                    match *coord {
                        FreeCoord::X(i) => set(&mut s.x[i], c),
                        FreeCoord::T(i) => set(&mut s.t[i], c),
                        FreeCoord::F | FreeCoord::G(_) => unreachable!("validated"),
                    }
                }
                Ok(Dataset::Operator(OpDataset::new(samples)?))
            }
        }
    }

    /// Bitmask of satisfied conditions at one point. A check that errors
    /// (for example a sample leaving a constrained domain) counts as not
    /// satisfied.
    pub fn classify(&self, values: &[f64]) -> u64 {
        let Ok(ds) = self.instantiate(values) else { return 0 };
        self.conditions.iter().enumerate().fold(0, |mask, (bit, c)| {
            match check(&ds, &c.spec, c.strengthened, &self.scan, &self.tol) {
                Ok(v) if v.satisfied => mask | (1 << bit),
                _ => mask,
            }
        })
    }

    /// Axis label such as `f2` or `t3[0]`, with one-based sample numbers.
    fn axis_name(&self, c: usize) -> String {
        let n = self.sample + 1;
        match self.free[c] {
            FreeCoord::F => format!("f{n}"),
            FreeCoord::X(i) => format!("x{n}[{i}]"),
            FreeCoord::G(i) => format!("g{n}[{i}]"),
            FreeCoord::T(i) => format!("t{n}[{i}]"),
        }
    }

    pub fn scan(&self) -> Result<RegionGrid> {
        self.validate()?;
        let xs = axis(self.ranges[0], self.resolution[0]);
        let (ys, second) = if self.free.len() == 2 {
            (axis(self.ranges[1], self.resolution[1]), self.axis_name(1))
        } else {
            (vec![0.0], String::new())
        };
        let two = self.free.len() == 2;
        let layers = self.conditions.iter().map(|c| c.label.clone()).collect();
        Ok(raster([self.axis_name(0), second], xs, ys, layers, |x, y| {
            if two {
                self.classify(&[x, y])
            } else {
                self.classify(&[x])
            }
        }))
    }
}

/// `n` evenly spaced nodes from `lo` to `hi` inclusive; `lo` alone when `n = 1`.
pub fn axis([lo, hi]: [f64; 2], n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn raster(axes: [String; 2], xs: Vec<f64>, ys: Vec<f64>, layers: Vec<String>, cell: impl Fn(f64, f64) -> u64 + Sync) -> RegionGrid {
    let nx = xs.len();
    let cells = (0..nx * ys.len())
        .into_par_iter()
        .map(|k| cell(xs[k % nx], ys[k / nx]))
        .collect();
    RegionGrid { axes, xs, ys, layers, cells }
}

/// Per-cell bitmasks; bit `k` is set when layer `k` is satisfied. Cells are
/// stored row by row with the first coordinate varying fastest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionGrid {
    pub axes: [String; 2],
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub layers: Vec<String>,
    pub cells: Vec<u64>,
}

impl RegionGrid {
    pub fn mask(&self, ix: usize, iy: usize) -> u64 {
        self.cells[iy * self.xs.len() + ix]
    }

    pub fn satisfied(&self, layer: usize, ix: usize, iy: usize) -> bool {
        self.mask(ix, iy) >> layer & 1 == 1
    }

    /// Number of cells where `layer` holds.
    pub fn count(&self, layer: usize) -> usize {
        self.cells.iter().filter(|m| *m >> layer & 1 == 1).count()
    }

    /// Whether every cell satisfying `inner` also satisfies `outer`.
    pub fn nested(&self, inner: usize, outer: usize) -> bool {
        self.cells.iter().all(|m| m >> inner & 1 == 0 || m >> outer & 1 == 1)
    }

    /// Header `coord1,coord2,<layer>...`, then one row per cell with 0/1 flags.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("coord1,coord2");
        for l in &self.layers {
            out.push(',');
            out.push_str(&l.replace([',', '\n'], ";"));
        }
        out.push('\n');
        let one_axis = self.axes[1].is_empty();
        for (iy, y) in self.ys.iter().enumerate() {
            for (ix, x) in self.xs.iter().enumerate() {
                let m = self.mask(ix, iy);
                if one_axis {
                    let _ = write!(out, "{x},");
                } else {
                    let _ = write!(out, "{x},{y}");
                }
                for k in 0..self.layers.len() {
                    out.push(',');
                    out.push(if m >> k & 1 == 1 { '1' } else { '0' });
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        let masks: Vec<Vec<u8>> = (0..self.layers.len())
            .map(|k| self.cells.iter().map(|m| (m >> k & 1) as u8).collect())
            .collect();
        let mut obj = Map::new();
        obj.insert("axes".into(), json!(self.axes));
        obj.insert("xs".into(), json!(self.xs));
        obj.insert("ys".into(), json!(self.ys));
        obj.insert("layers".into(), json!(self.layers));
        obj.insert("counts".into(), json!((0..self.layers.len()).map(|k| self.count(k)).collect::<Vec<_>>()));
        obj.insert("masks".into(), json!(masks));
        Value::Object(obj)
    }

    /// One translucent filled layer per condition, in listed order, with
    /// horizontal runs of satisfied cells merged into single rectangles.
    pub fn to_svg(&self) -> String {
        const PALETTE: [&str; 8] = ["#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860", "#da8bc3", "#8c8c8c"];
        const CELL: f64 = 2.0;
        const MARGIN: f64 = 60.0;
        const LEGEND: f64 = 220.0;
        let (nx, ny) = (self.xs.len(), self.ys.len());
        let (w, h) = (nx as f64 * CELL, ny as f64 * CELL);
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{tw}" height="{th}" viewBox="0 0 {tw} {th}">"#,
            tw = w + 2.0 * MARGIN + LEGEND,
            th = h + 2.0 * MARGIN
        );
        let _ = writeln!(out, r#"<rect x="{MARGIN}" y="{MARGIN}" width="{w}" height="{h}" fill="white" stroke="black"/>"#);
        for (k, label) in self.layers.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let _ = writeln!(out, r#"<g id="layer{k}" fill="{color}" fill-opacity="0.45" data-label="{}">"#, escape(label));
            for iy in 0..ny {
                // Row 0 is the lowest value of the second coordinate, drawn at the bottom.
                let top = MARGIN + (ny - 1 - iy) as f64 * CELL;
                let mut ix = 0;
                while ix < nx {
                    if !self.satisfied(k, ix, iy) {
                        ix += 1;
                        continue;
                    }
                    let start = ix;
                    while ix < nx && self.satisfied(k, ix, iy) {
                        ix += 1;
                    }
                    let _ = writeln!(
                        out,
                        r#"<rect x="{}" y="{top}" width="{}" height="{CELL}"/>"#,
                        MARGIN + start as f64 * CELL,
                        (ix - start) as f64 * CELL
                    );
                }
            }
            out.push_str("</g>\n");
            let ly = MARGIN + 20.0 * k as f64;
            let lx = MARGIN * 1.5 + w;
            let _ = writeln!(out, r#"<rect x="{lx}" y="{ly}" width="14" height="14" fill="{color}" fill-opacity="0.6"/>"#);
            let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="12">{}</text>"#, lx + 20.0, ly + 12.0, escape(label));
        }
        let range = |v: &[f64]| (v.first().copied().unwrap_or(0.0), v.last().copied().unwrap_or(0.0));
        let (x0, x1) = range(&self.xs);
        let (y0, y1) = range(&self.ys);
        let _ = writeln!(out, r#"<text x="{MARGIN}" y="{}" font-size="12">{x0}</text>"#, MARGIN + h + 16.0);
        let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="12" text-anchor="end">{x1}</text>"#, MARGIN + w, MARGIN + h + 16.0);
        let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">{}</text>"#, MARGIN + w / 2.0, MARGIN + h + 36.0, escape(&self.axes[0]));
        if !self.axes[1].is_empty() {
            let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="12" text-anchor="end">{y0}</text>"#, MARGIN - 4.0, MARGIN + h);
            let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="12" text-anchor="end">{y1}</text>"#, MARGIN - 4.0, MARGIN + 12.0);
            let _ = writeln!(
                out,
                r#"<text x="{x}" y="{y}" font-size="13" text-anchor="middle" transform="rotate(-90 {x} {y})">{}</text>"#,
                escape(&self.axes[1]),
                x = MARGIN - 30.0,
                y = MARGIN + h / 2.0
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Output encodings for a [`RegionGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridFormat {
    Csv,
    Svg,
    Json,
}

impl GridFormat {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "csv" => Ok(GridFormat::Csv),
            "svg" => Ok(GridFormat::Svg),
            "json" => Ok(GridFormat::Json),
            other => Err(Error::Parameter(format!("unknown output format `{other}`"))),
        }
    }

    /// Guesses the format from a file extension.
    pub fn from_path(path: &std::path::Path) -> Option<Self> {
        path.extension().and_then(|e| e.to_str()).and_then(|e| Self::parse(e).ok())
    }
}

pub fn render(grid: &RegionGrid, format: GridFormat) -> String {
    match format {
        GridFormat::Csv => grid.to_csv(),
        GridFormat::Svg => grid.to_svg(),
        GridFormat::Json => serde_json::to_string_pretty(&grid.to_json_value()).expect("grid serializes") + "\n",
    }
}

/// Writes `grid` to `path` in the given format.
pub fn emit(grid: &RegionGrid, format: GridFormat, path: impl AsRef<std::path::Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render(grid, format)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Bounds on `f(y)` against `⟨g_y, y⟩` for `x = 0`, `f_x = 0`, `g_x = 0`,
/// `y = e_1` and `‖g_y‖² = 1/2`. Layers are the two-step and the one-step
/// bound bands; cells where `⟨g_y, y⟩² > 1/2` admit no gradient and are empty.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsFigure {
    pub l: f64,
    pub ranges: [[f64; 2]; 2],
    pub resolution: [usize; 2],
}

impl BoundsFigure {
    pub const GRADIENT_NORM2: f64 = 0.5;

    pub fn scan(&self) -> Result<RegionGrid> {
        let xs = axis(self.ranges[0], self.resolution[0]);
        let ys = axis(self.ranges[1], self.resolution[1]);
        let layers = vec!["two-step bounds".to_string(), "one-step bounds".to_string()];
        let l = self.l;
        let band = move |s: f64, steps: usize| -> Option<(f64, f64)> {
            let rest = Self::GRADIENT_NORM2 - s * s;
            if rest < 0.0 {
                return None;
            }
            let b = bounds_bu(&[0.0, 0.0], &[0.0, 0.0], 0.0, &[1.0, 0.0], &[s, rest.sqrt()], l, steps).ok()?;
            b.feasible.then_some((b.lower, b.upper))
        };
        Ok(raster(["<g_y,y>".into(), "f_y".into()], xs, ys, layers, |s, f| {
            [2, 1].iter().enumerate().fold(0, |mask, (bit, &steps)| match band(s, steps) {
                Some((lo, hi)) if lo <= f && f <= hi => mask | (1 << bit),
                _ => mask,
            })
        }))
    }
}

/// A built-in figure reproduction.
#[derive(Debug, Clone, PartialEq)]
pub enum Figure {
    Scan(Box<RegionSpec>),
    Bounds(BoundsFigure),
}

impl Figure {
    pub fn scan(&self) -> Result<RegionGrid> {
        match self {
            Figure::Scan(spec) => spec.scan(),
            Figure::Bounds(b) => b.scan(),
        }
    }

    pub fn set_resolution(&mut self, nx: usize, ny: usize) {
        match self {
            Figure::Scan(spec) => spec.resolution = vec![nx, ny],
            Figure::Bounds(b) => b.resolution = [nx, ny],
        }
    }

    pub fn set_ranges(&mut self, x: [f64; 2], y: [f64; 2]) {
        match self {
            Figure::Scan(spec) => spec.ranges = vec![x, y],
            Figure::Bounds(b) => b.ranges = [x, y],
        }
    }

    pub fn resolution(&self) -> [usize; 2] {
        match self {
            Figure::Scan(spec) => [spec.resolution[0], spec.resolution[1]],
            Figure::Bounds(b) => b.resolution,
        }
    }
}

fn function_base(samples: Value) -> Dataset {
    Dataset::from_json_value(&json!({"kind": "function", "samples": samples}), None).expect("built-in dataset")
}

fn operator_base(samples: Value) -> Dataset {
    Dataset::from_json_value(&json!({"kind": "operator", "samples": samples}), None).expect("built-in dataset")
}

/// Scan settings for the operator figures: every cell runs several simplex
/// maximizations, so the grid and the simplex scan are coarser.
const OPERATOR_FIGURE_RESOLUTION: usize = 120;
const OPERATOR_FIGURE_SCAN: SimplexScan = SimplexScan { subdivisions: 40, refine_starts: 3, refine_iters: 150 };

/// The built-in specs for figures 1 to 6. Axis ranges are chosen to contain
/// the classical region of each figure.
pub fn builtin_figure(number: u32) -> Result<Figure> {
    let scan = |base: Dataset, sample, free, ranges, conditions, resolution: usize, simplex: SimplexScan| {
        Figure::Scan(Box::new(RegionSpec {
            base,
            sample,
            free,
            ranges,
            resolution: vec![resolution; 2],
            conditions,
            tol: Tolerance::default(),
            scan: simplex,
        }))
    };
    let figure = match number {
        1 => {
            let base = function_base(json!([{"x": [0.0], "f": 0.0, "g": [1.0]}, {"x": [1.0], "f": 0.0, "g": [0.0]}]));
            let mut conditions: Vec<RegionCondition> = (0..5)
                .map(|k| {
                    RegionCondition::new(format!("alpha_{k}"), ClassSpec::SmoothConvexAlpha { l: 1.0, alpha: alpha_iterate(k) }, false)
                })
                .collect();
            conditions.push(RegionCondition::new("alpha=1", ClassSpec::SmoothConvexAlpha { l: 1.0, alpha: 1.0 }, false));
            scan(
                base,
                1,
                vec![FreeCoord::G(0), FreeCoord::F],
                vec![[0.88, 2.077], [0.88, 2.077]],
                conditions,
                DEFAULT_RESOLUTION,
                SimplexScan::default(),
            )
        }
        2 => {
            let base = function_base(json!([
                {"x": [0.0], "f": 0.0, "g": [0.0]},
                {"x": [1.0], "f": 0.25, "g": [0.5]},
                {"x": [0.375], "f": 0.0, "g": [0.0]}
            ]));
            let loja = ClassSpec::Lojasiewicz { mu: 0.5, l: 1.0, f_star: 0.0 };
            scan(
                base,
                2,
                vec![FreeCoord::G(0), FreeCoord::F],
                vec![[0.0, 0.45], [-0.01, 0.09]],
                vec![RegionCondition::new("loja", loja.clone(), false), RegionCondition::new("loja strengthened", loja, true)],
                DEFAULT_RESOLUTION,
                SimplexScan::default(),
            )
        }
        3 => {
            let base = function_base(json!([
                {"x": [-1.0, 0.0], "f": 0.5, "g": [-1.0, 0.0]},
                {"x": [1.0, 0.0], "f": 0.5, "g": [1.0, 0.0]},
                {"x": [0.0, 1.0], "f": 0.0, "g": [0.0, 0.0]}
            ]));
            let blockwise = ClassSpec::BlockwiseSmooth { partition: vec![vec![0], vec![1]], lvec: vec![1.0, 1.0] };
            scan(
                base,
                2,
                vec![FreeCoord::G(1), FreeCoord::F],
                vec![[-0.25, 1.85], [-0.1, 1.1]],
                vec![
                    RegionCondition::new("blockwise", blockwise.clone(), false),
                    RegionCondition::new("blockwise strengthened", blockwise, true),
                ],
                DEFAULT_RESOLUTION,
                SimplexScan::default(),
            )
        }
        4 | 6 => {
            let (samples, class) = if number == 4 {
                (
                    json!([
                        {"x": [0.0, 0.0], "t": [0.0, 0.0]},
                        {"x": [1.0, 0.0], "t": [0.0, -0.5]},
                        {"x": [0.5, 0.5], "t": [0.0, 0.0]}
                    ]),
                    ClassSpec::MonotoneLipschitzOp { mu: 0.0, l: 1.0 },
                )
            } else {
                (
                    json!([
                        {"x": [0.0, 0.0], "t": [0.0, 0.0]},
                        {"x": [1.0, -0.5], "t": [1.0, 0.0]},
                        {"x": [0.5, 0.5], "t": [0.0, 0.0]}
                    ]),
                    ClassSpec::CocoerciveOp { mu: 0.5, beta: 1.0 },
                )
            };
            let name = if number == 4 { "monotone-lipschitz" } else { "cocoercive" };
            scan(
                operator_base(samples),
                2,
                vec![FreeCoord::T(0), FreeCoord::T(1)],
                if number == 4 { vec![[-0.4, 0.7], [-0.5, 0.4]] } else { vec![[0.1, 0.7], [0.15, 0.75]] },
                vec![
                    RegionCondition::new(name, class.clone(), false),
                    RegionCondition::new(format!("{name} strengthened"), class, true),
                ],
                OPERATOR_FIGURE_RESOLUTION,
                OPERATOR_FIGURE_SCAN,
            )
        }
        5 => Figure::Bounds(BoundsFigure {
            l: 1.0,
            ranges: [[0.45, 0.75], [0.15, 0.55]],
            resolution: [DEFAULT_RESOLUTION; 2],
        }),
        other => return Err(Error::Parameter(format!("figure {other} does not exist; choose 1 to 6"))),
    };
    Ok(figure)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markers_parse() {
        assert_eq!(FreeCoord::parse("f").unwrap(), FreeCoord::F);
        assert_eq!(FreeCoord::parse("g[1]").unwrap(), FreeCoord::G(1));
        assert_eq!(FreeCoord::parse("t[0]").unwrap().marker(), "t[0]");
        for bad in ["g", "g[]", "h[0]", "f[0]", "g[-1]"] {
            assert!(FreeCoord::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn axis_nodes() {
        assert_eq!(axis([0.0, 1.0], 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(axis([2.0, 5.0], 1), vec![2.0]);
    }

    fn small_spec() -> RegionSpec {
        RegionSpec::from_json_str(
            r#"{"kind": "function", "d": 1,
                "samples": [{"x": [0], "f": 0, "g": [1]}, {"x": [1], "g": [0], "free": ["g[0]", "f"]}],
                "ranges": [[0, 2], [0.5, 2.5]], "resolution": [2, 2],
                "conditions": [{"class": "smooth-convex", "L": 1}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn spec_parses_and_scans() {
        let spec = small_spec();
        assert_eq!(spec.sample, 1);
        assert_eq!(spec.conditions[0].label, "smooth-convex");
        let grid = spec.scan().unwrap();
        let csv = grid.to_csv();
        assert_eq!(csv.lines().count(), 5);
        assert_eq!(csv.lines().next().unwrap(), "coord1,coord2,smooth-convex");
        assert_eq!(grid.axes, ["g2[0]".to_string(), "f2".to_string()]);
    }

    #[test]
    fn bad_specs_are_rejected() {
        let base = r#"{"kind": "function", "samples": [{"x": [0], "f": 0, "g": [1], "free": FREE}],
                       "ranges": RANGES, "conditions": [{"class": "smooth-convex", "L": 1}]}"#;
        let build = |free: &str, ranges: &str| RegionSpec::from_json_str(&base.replace("FREE", free).replace("RANGES", ranges));
        assert!(build(r#"["f"]"#, "[[0, 1]]").is_ok());
        assert!(build(r#"["f", "t[0]"]"#, "[[0, 1], [0, 1]]").is_err());
        assert!(build(r#"["g[3]"]"#, "[[0, 1]]").is_err());
        assert!(build(r#"["f"]"#, "[[1, 0]]").is_err());
        assert!(build(r#"["f", "f"]"#, "[[0, 1], [0, 1]]").is_err());
        assert!(build(r#"[]"#, "[]").is_err());
    }

    #[test]
    fn single_cell_matches_direct_check() {
        let mut spec = small_spec();
        spec.ranges = vec![[1.5, 1.5], [1.2, 1.2]];
        spec.resolution = vec![1, 1];
        let grid = spec.scan().unwrap();
        let ds = spec.instantiate(&[1.5, 1.2]).unwrap();
        let direct = check(&ds, &spec.conditions[0].spec, false, &spec.scan, &spec.tol).unwrap();
        assert_eq!(grid.cells, vec![u64::from(direct.satisfied)]);
    }

    #[test]
    fn one_free_coordinate_leaves_coord2_blank() {
        let spec = RegionSpec::from_json_str(
            r#"{"kind": "function", "samples": [{"x": [0], "f": 0, "g": [0]}, {"x": [1], "g": [1], "free": ["f"]}],
                "ranges": [[0, 1]], "resolution": 3, "conditions": [{"class": "smooth-convex", "L": 1, "label": "p"}]}"#,
        )
        .unwrap();
        let csv = spec.scan().unwrap().to_csv();
        assert_eq!(csv, "coord1,coord2,p\n0,,1\n0.5,,1\n1,,1\n");
    }

    #[test]
    fn svg_and_json_outputs() {
        let grid = small_spec().scan().unwrap();
        let svg = grid.to_svg();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<g id=\"layer").count(), 1);
        let json = grid.to_json_value();
        assert_eq!(json["masks"][0].as_array().unwrap().len(), 4);
    }

    #[test]
    fn builtin_figures_exist() {
        for n in 1..=6 {
            let fig = builtin_figure(n).unwrap();
            if let Figure::Scan(spec) = &fig {
                spec.validate().unwrap();
            }
        }
        assert!(builtin_figure(7).is_err());
    }
}
