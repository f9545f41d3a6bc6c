//! One function per subcommand, each producing a `Document`.

use hksym_core::lattice::{Lattice, LatticeVector, MarkedMukaiSetup};
use hksym_core::monodromy::{self, AmbiguityVerdict, Conclusion, InvolutionHit, Isometry};
use hksym_core::mori::{self, AmpleReport, PicardSetup, Ray, SecondRay};
use hksym_core::orbits::{self, DesignCertificate, RayOrbit};
use hksym_core::serde_big;
use hksym_core::surd::surd_cf;
use hksym_core::walls::{self, Wall};
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::render::{csv_table, markdown_table, Document};
use crate::CliError;

/// "x f − y δ" with the sign folded in.
pub fn class_text(x: &BigInt, y: &BigInt) -> String {
    let f = match x.to_string().as_str() {
        "0" => String::new(),
        "1" => "f".into(),
        "-1" => "−f".into(),
        s => format!("{}f", s.replace('-', "−")),
    };
    if y.is_zero() {
        return if f.is_empty() { "0".into() } else { f };
    }
    let mag = y.abs();
    let d = if mag == BigInt::from(1) { "δ".to_string() } else { format!("{mag}δ") };
    match (f.is_empty(), y.is_positive()) {
        (true, true) => format!("−{d}"),
        (true, false) => d,
        (false, true) => format!("{f} − {d}"),
        (false, false) => format!("{f} + {d}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallsOutput {
    #[serde(with = "serde_big::scalar")]
    pub v_sq: BigInt,
    pub walls: Vec<WallRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallRow {
    #[serde(flatten)]
    pub wall: Wall,
    pub interpretation: String,
}

pub fn walls(v_sq: &BigInt) -> Result<Document, CliError> {
    if !v_sq.is_positive() || (v_sq % 2u32) != BigInt::zero() {
        return Err(CliError::Usage(format!("--vsq must be a positive even integer, got {v_sq}")));
    }
    let list = walls::enumerate_wall_types(v_sq)?;
    let out = WallsOutput {
        v_sq: v_sq.clone(),
        walls: list
            .iter()
            .map(|w| WallRow { wall: w.clone(), interpretation: w.descriptor.interpretation() })
            .collect(),
    };
    Ok(Document::new(&out)
        .with_markdown(walls::render_markdown(&list))
        .with_csv(walls::render_csv(&list)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoriOutput {
    #[serde(flatten)]
    pub result: mori::MoriResult,
    pub second_ray_class: String,
    pub elapsed_ms: u64,
}

pub fn mori(n: u64, f_sq: &BigInt) -> Result<Document, CliError> {
    let setup = PicardSetup::new(n, f_sq.clone())?;
    let start = Instant::now();
    let result = mori::mori_generators(&setup)?;
    let second_ray_class = match &result.second_ray {
        SecondRay::Wall(w) => class_text(&w.ray.s, &w.ray.t),
        SecondRay::PositiveConeBoundary { ray: Some(r) } => class_text(&r.s, &r.t),
        SecondRay::PositiveConeBoundary { ray: None } => "positive cone boundary (irrational)".into(),
    };
    let elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(Document::new(&MoriOutput { result, second_ray_class, elapsed_ms }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairings {
    #[serde(with = "serde_big::scalar")]
    pub delta: BigInt,
    #[serde(with = "serde_big::opt")]
    pub second_ray: Option<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmpleOutput {
    pub n: u64,
    #[serde(with = "serde_big::scalar")]
    pub f_sq: BigInt,
    pub divisor: String,
    pub ample: bool,
    #[serde(with = "serde_big::scalar")]
    pub square: BigInt,
    pub pairings: Pairings,
    pub report: AmpleReport,
}

pub fn ample(n: u64, f_sq: &BigInt, x: &BigInt, y: &BigInt) -> Result<Document, CliError> {
    let setup = PicardSetup::new(n, f_sq.clone())?;
    let report = mori::is_ample(&setup, x, y)?;
    let out = AmpleOutput {
        n,
        f_sq: f_sq.clone(),
        divisor: class_text(x, y),
        ample: report.ample,
        square: report.square.clone(),
        pairings: Pairings {
            delta: report.delta_pairing.clone(),
            second_ray: report.second_ray_pairing.clone(),
        },
        report,
    };
    Ok(Document::new(&out))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallTableOutput {
    pub n: u64,
    #[serde(with = "serde_big::scalar")]
    pub f_sq: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub window: BigInt,
    pub expansion: hksym_core::surd::SurdCF,
    pub rows: Vec<mori::NormRow>,
}

pub fn smalltable(
    n: u64,
    f_sq: &BigInt,
    window: Option<&BigInt>,
    max_rows: Option<usize>,
    cfg: &Config,
) -> Result<Document, CliError> {
    let setup = PicardSetup::new(n, f_sq.clone())?;
    let window = match (window, &cfg.window_override) {
        (Some(w), _) => w.clone(),
        (None, Some(c)) => c.abs(),
        (None, None) => setup.window().abs(),
    };
    let rows = mori::small_norm_table(&setup, &window, max_rows)?;
    let expansion = surd_cf(&setup.pell_d(), &setup.two_m(), 0)?;
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.a.to_string(), r.b.to_string(), r.value.to_string()])
        .collect();
    let value_header = format!("{}a²−{}b²", f_sq, setup.two_m());
    let header = ["a", "b", value_header.as_str()];
    let md = markdown_table(&header, &cells);
    let csv = csv_table(&["a", "b", "value"], &cells);
    let out = SmallTableOutput { n, f_sq: f_sq.clone(), window, expansion, rows };
    Ok(Document::new(&out).with_markdown(md).with_csv(csv))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitOutput {
    pub n: u64,
    #[serde(with = "serde_big::scalar")]
    pub f_sq: BigInt,
    pub ray: Ray,
    pub class: String,
    pub orbit: RayOrbit,
    /// the ray inside the full Mukai lattice, f = e₂ + (f²/2) f₂
    pub embedded: LatticeVector,
    pub embedded_orbit: RayOrbit,
}

pub fn orbit(n: u64, f_sq: &BigInt, s: &BigInt, t: &BigInt) -> Result<Document, CliError> {
    let setup = PicardSetup::new(n, f_sq.clone())?;
    let ray = Ray::effective(s, t)?;
    let mukai = MarkedMukaiSetup::new(n, None)?;
    let embedded = orbits::embed_ray(&mukai, &setup, &ray)?;
    let out = OrbitOutput {
        n,
        f_sq: f_sq.clone(),
        class: class_text(&ray.s, &ray.t),
        orbit: orbits::ray_orbit(&setup, &ray),
        embedded_orbit: orbits::orbit_invariants(&mukai, &embedded)?,
        embedded,
        ray,
    };
    Ok(Document::new(&out))
}

pub fn design(
    n: u64,
    s: &BigInt,
    rho_sq: &BigInt,
    t_residue: &BigInt,
    t_ceiling: &BigInt,
) -> Result<Document, CliError> {
    let cert: DesignCertificate = orbits::design_degree(n, s, t_residue, rho_sq, t_ceiling)?;
    Ok(Document::new(&cert))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectOutput {
    pub n: u64,
    #[serde(with = "serde_big::scalar")]
    pub f_sq: BigInt,
    pub g: String,
    /// columns are the images of f and δ
    pub isometry: Isometry,
    pub image_f: LatticeVector,
    pub image_delta: LatticeVector,
    pub involution: bool,
    pub g_ample: AmpleReport,
}

pub fn reflect(n: u64, f_sq: &BigInt, x: &BigInt, y: &BigInt) -> Result<Document, CliError> {
    let setup = PicardSetup::new(n, f_sq.clone())?;
    let iso = monodromy::reflect_pic(&setup, x, y)?;
    let basis = |i| iso.parent.basis_vector(i);
    let out = ReflectOutput {
        n,
        f_sq: f_sq.clone(),
        g: class_text(x, y),
        image_f: iso.apply(&basis(0))?,
        image_delta: iso.apply(&basis(1))?,
        involution: iso.is_involution(),
        g_ample: mori::is_ample(&setup, x, y)?,
        isometry: iso,
    };
    Ok(Document::new(&out))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityOutput {
    pub alpha: Isometry,
    pub ambient: Lattice,
    pub verdict: AmbiguityVerdict,
    pub conclusion_text: String,
}

pub fn conclusion_text(c: Conclusion) -> &'static str {
    match c {
        Conclusion::ImageNotExtremal => "image ray not extremal; ample cones differ",
        Conclusion::ImageMatchesWallClass => "image lattice matches a wall class",
    }
}

pub fn ambiguity(n: u64) -> Result<Document, CliError> {
    let verdict = monodromy::ambiguity_pipeline(n)?;
    let ambient = MarkedMukaiSetup::new(n, Some(Lattice::hyperbolic("e2", "f2")))?.ambient;
    let out = AmbiguityOutput {
        alpha: monodromy::build_alpha_n7()?,
        ambient,
        conclusion_text: conclusion_text(verdict.conclusion).into(),
        verdict,
    };
    Ok(Document::new(&out))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionOutput {
    #[serde(with = "serde_big::scalar")]
    pub ceiling: BigInt,
    pub depth: usize,
    pub hits: Vec<InvolutionHit>,
}

pub fn involution_search(ceiling: &BigInt, depth: usize) -> Result<Document, CliError> {
    if depth == 0 {
        return Err(CliError::Usage("--depth must be at least 1".into()));
    }
    let hits = monodromy::find_involution_degree(ceiling, depth)?;
    let cells: Vec<Vec<String>> = hits
        .iter()
        .map(|h| {
            let r = match &h.second_ray {
                SecondRay::Wall(w) => class_text(&w.ray.s, &w.ray.t),
                SecondRay::PositiveConeBoundary { .. } => "boundary".into(),
            };
            let p = h.second_ray_pairing.as_ref().map(|p| p.to_string()).unwrap_or_default();
            vec![h.f_sq.to_string(), class_text(&h.x, &h.y), r, p]
        })
        .collect();
    let header = ["f²", "g", "R", "g·R"];
    let out = InvolutionOutput { ceiling: ceiling.clone(), depth, hits };
    Ok(Document::new(&out)
        .with_markdown(markdown_table(&header, &cells))
        .with_csv(csv_table(&["f_sq", "g", "R", "pairing"], &cells)))
}
