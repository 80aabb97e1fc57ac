//! The shipped example specs, embedded at compile time.
//!
//! Each file under `gallery/` is the JSON form of a generator call; the
//! `files_match_generators` test keeps them in sync (run it with
//! `QUANTRED_BLESS=1` to rewrite the files).

use crate::geometry::{
    document::from_json, dual, make_flag_manifold, make_projective_space, product, tensor_power,
    GeometryError, ManifoldSpec,
};
use crate::lattice_weyl::{RootDatum, Weight};

/// One shipped spec.
#[derive(Debug, Clone, Copy)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub json: &'static str,
    /// Tie-break needed by strata whose moment is orthogonal to a tangent weight.
    pub tiebreak: Option<&'static [i64]>,
}

impl GalleryEntry {
    pub fn spec(&self) -> ManifoldSpec {
        from_json(self.json).expect("gallery specs parse")
    }

    pub fn tiebreak(&self) -> Option<Weight> {
        self.tiebreak.map(|t| Weight::new(t.to_vec()))
    }
}

macro_rules! entry {
    ($name:literal) => {
        entry!($name, None)
    };
    ($name:literal, $tiebreak:expr) => {
        GalleryEntry {
            name: $name,
            json: include_str!(concat!("../gallery/", $name, ".json")),
            tiebreak: $tiebreak,
        }
    };
}

pub const GALLERY: &[GalleryEntry] = &[
    entry!("cp1_o2"),
    entry!("cp1_shifted"),
    entry!("cp1_weight3"),
    entry!("cp2"),
    entry!("flag_su2"),
    entry!("flag_su2_dual"),
    entry!("flag_a2"),
    entry!("cp1_shifted_x_cp1", Some(&[0, 1])),
];

pub fn entry(name: &str) -> Option<&'static GalleryEntry> {
    GALLERY.iter().find(|e| e.name == name)
}

/// Loads a shipped spec by name.
pub fn load(name: &str) -> Option<ManifoldSpec> {
    entry(name).map(GalleryEntry::spec)
}

fn w(v: &[i64]) -> Weight {
    Weight::new(v.to_vec())
}

fn with_powers(spec: ManifoldSpec, bundle: &str, powers: std::ops::RangeInclusive<i64>) -> Result<ManifoldSpec, GeometryError> {
    let mut out = spec;
    for k in powers {
        let (next, _) = tensor_power(&out, bundle, k)?;
        out = next;
    }
    Ok(out)
}

fn named(mut spec: ManifoldSpec, name: &str) -> ManifoldSpec {
    spec.name = name.to_string();
    spec
}

/// Rebuilds a shipped spec from the generators.
pub fn generate(name: &str) -> Result<ManifoldSpec, GeometryError> {
    let cp1 = |k, shift| make_projective_space(&[w(&[0]), w(&[1])], k, &w(&[shift]));
    let spec = match name {
        "cp1_o2" => cp1(2, 0)?,
        "cp1_shifted" => with_powers(cp1(2, -1)?, "L", 2..=5)?,
        "cp1_weight3" => with_powers(make_projective_space(&[w(&[0]), w(&[3])], 1, &w(&[-1]))?, "L", 2..=5)?,
        "cp2" => make_projective_space(&[w(&[0, 0]), w(&[1, 0]), w(&[0, 1])], 3, &w(&[-1, -1]))?,
        "flag_su2" => with_powers(make_flag_manifold(&RootDatum::su2(), &w(&[2]))?, "L", 2..=3)?,
        "flag_su2_dual" => {
            let (spec, inverse) = dual(&make_flag_manifold(&RootDatum::su2(), &w(&[2]))?, "L")?;
            with_powers(spec, &inverse, 2..=6)?
        }
        "flag_a2" => make_flag_manifold(&RootDatum::a2(), &w(&[1, 1]))?,
        "cp1_shifted_x_cp1" => {
            // each factor rotated by its own circle of a rank-two torus
            let left = make_projective_space(&[w(&[0, 0]), w(&[1, 0])], 2, &w(&[-1, 0]))?;
            let right = make_projective_space(&[w(&[0, 0]), w(&[0, 1])], 1, &w(&[0, 0]))?;
            product(&left, &right)?
        }
        other => return Err(GeometryError::Parse(format!("unknown gallery spec {other}"))),
    };
    Ok(named(spec, name))
}
