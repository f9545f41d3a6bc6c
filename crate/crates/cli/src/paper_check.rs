//! Reproduction suite: recompute every reference value and compare exactly.

use std::time::{Duration, Instant};

use hksym_core::arith::big;
use hksym_core::forms::{self, mat2, mat2_mul, reduce, BinaryForm, Mat2};
use hksym_core::lattice::{LatticeVector, MarkedMukaiSetup};
use hksym_core::monodromy;
use hksym_core::mori::{self, bound_window, PicardSetup, Ray, SecondRay};
use hksym_core::orbits;
use hksym_core::surd::surd_cf;
use hksym_core::walls::{self, BaseFactor, DecompositionKind};
use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::commands::{class_text, conclusion_text};
use crate::config::Config;
use crate::render::markdown_table;
use crate::CliError;

pub const DEFAULT_SEED: u64 = 0x5eed;
/// Per-instance budget for design certificates; slower instances are reported.
pub const DESIGN_BUDGET: Duration = Duration::from_secs(10);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub criterion: u8,
    pub expected: String,
    pub computed: String,
    #[serde(rename = "match")]
    pub matched: bool,
    pub source_citation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deviation {
    pub id: String,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperCheckReport {
    pub version: String,
    pub config: Config,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub mismatches: Vec<String>,
    pub noted_deviations: Vec<Deviation>,
    pub degraded: bool,
    pub degraded_reasons: Vec<String>,
    /// design instances that exceeded the time budget
    pub over_budget: Vec<String>,
}

impl PaperCheckReport {
    pub fn all_match(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn criterion_passes(&self, c: u8) -> bool {
        self.checks.iter().filter(|x| x.criterion == c).all(|x| x.matched)
    }

    pub fn markdown(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .checks
            .iter()
            .map(|c| {
                vec![
                    c.criterion.to_string(),
                    c.id.clone(),
                    if c.matched { "yes".into() } else { "NO".into() },
                    c.expected.clone(),
                    c.computed.clone(),
                ]
            })
            .collect();
        let mut s = markdown_table(&["criterion", "id", "match", "expected", "computed"], &rows);
        if !self.noted_deviations.is_empty() {
            s.push_str("\nNoted deviations:\n\n");
            for d in &self.noted_deviations {
                s.push_str(&format!("- {}: {}\n", d.id, d.description));
            }
        }
        if self.degraded {
            s.push_str("\nDegraded run:\n\n");
            for r in &self.degraded_reasons {
                s.push_str(&format!("- {r}\n"));
            }
        }
        s
    }
}

struct Builder {
    checks: Vec<Check>,
}

impl Builder {
    fn add(&mut self, criterion: u8, id: &str, citation: &str, expected: impl ToString, computed: impl ToString) {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        self.checks.push(Check {
            id: id.into(),
            criterion,
            matched: expected == computed,
            expected,
            computed,
            source_citation: citation.into(),
        });
    }

    fn flag(&mut self, criterion: u8, id: &str, citation: &str, ok: bool) {
        self.add(criterion, id, citation, true, ok);
    }
}

/// Rows (a², (a,v), (v−a)², disc, interpretation, isogenous) of the wall tables.
pub type WallRowSpec = (i64, i64, i64, i64, &'static str, bool);

pub const WALL_TABLES: [(i64, &[WallRowSpec]); 4] = [
    (2, &[
        (-2, 0, 0, -4, "ℙ¹-bundle over S", false),
        (-2, 1, -2, -5, "ℙ²", false),
        (0, 1, 0, -1, "ℙ¹-bundle over S", false),
    ]),
    (4, &[
        (-2, 0, 2, -8, "ℙ¹-bundle over S^[2]", false),
        (-2, 1, 0, -9, "ℙ²-bundle over S", false),
        (-2, 2, -2, -12, "ℙ³", false),
        (0, 1, 2, -1, "ℙ¹-bundle over S×S", false),
        (0, 2, 0, -4, "ℙ¹-bundle over S×S′", true),
    ]),
    (6, &[
        (-2, 0, 4, -12, "ℙ¹-bundle over S^[3]", false),
        (-2, 1, 2, -13, "ℙ²-bundle over S^[2]", false),
        (-2, 2, 0, -16, "ℙ³-bundle over S", false),
        (-2, 3, -2, -21, "ℙ⁴", false),
        (0, 1, 4, -1, "ℙ¹-bundle over S×S^[2]", false),
        (0, 2, 2, -4, "ℙ¹-bundle over S′×S^[2]", true),
        (0, 3, 0, -9, "ℙ²-bundle over S×S′", true),
    ]),
    (8, &[
        (-2, 0, 6, -16, "ℙ¹-bundle over S^[4]", false),
        (-2, 1, 4, -17, "ℙ²-bundle over S^[3]", false),
        (-2, 2, 2, -20, "ℙ³-bundle over S^[2]", false),
        (-2, 3, 0, -25, "ℙ⁴-bundle over S", false),
        (-2, 4, -2, -32, "ℙ⁵", false),
        (0, 1, 6, -1, "ℙ¹-bundle over S×S^[3]", false),
        (0, 2, 4, -4, "ℙ¹-bundle over S′×S^[3]", true),
        (0, 3, 2, -9, "ℙ²-bundle over S′×S^[2]", true),
        (0, 4, 0, -16, "ℙ³-bundle over S×S′", true),
    ]),
];

pub fn render_row(r: &WallRowSpec) -> String {
    let iso = if r.5 { "; S, S′ isogenous" } else { "" };
    format!("({}, {}, {}, {}, {}{})", r.0, r.1, r.2, r.3, r.4, iso)
}

fn render_wall(w: &walls::Wall) -> String {
    let text = w.descriptor.interpretation();
    let text = text.trim_end_matches(" (S, S′ isogenous)");
    let iso = w.descriptor.base_factors.contains(&BaseFactor::K3Isogenous);
    let mut s = format!("({}, {}, {}, {}, {}", w.a_sq, w.av, w.vma_sq, w.disc, text);
    if iso {
        s.push_str("; S, S′ isogenous");
    }
    s.push(')');
    s
}

fn wall_tables(b: &mut Builder) -> Result<(), CliError> {
    for (vsq, rows) in WALL_TABLES {
        let computed = walls::enumerate_wall_types(&big(vsq))?;
        let cite = format!("wall table for v² = {vsq}");
        b.add(1, &format!("walls.v{vsq}.count"), &cite, rows.len(), computed.len());
        for (i, r) in rows.iter().enumerate() {
            let got = computed.get(i).map(render_wall).unwrap_or_else(|| "missing".into());
            b.add(1, &format!("walls.v{vsq}.row{}", i + 1), &cite, render_row(r), got);
        }
    }
    Ok(())
}

fn discriminant_lists(b: &mut Builder) -> Result<(), CliError> {
    // a² ↦ listed values of b = (a,v)
    let specs: [(i64, [(i64, Vec<i64>); 3]); 2] = [
        (10, [(-2, (0..=5).collect()), (0, (0..=5).collect()), (2, vec![5])]),
        (12, [(-2, (0..=6).collect()), (0, (0..=6).collect()), (2, vec![5, 6])]),
    ];
    for (vsq, groups) in specs {
        let computed = walls::enumerate_wall_types(&big(vsq))?;
        let cite = format!("discriminant list for v² = {vsq}");
        // (a², b) = (0, 0) is listed with disc −0² but spans a degenerate lattice
        let degenerate = |a_sq: i64, x: i64| a_sq * vsq - x * x == 0;
        let mut walls_expected = 0;
        for (a_sq, bs) in &groups {
            let mut got: Vec<String> = computed
                .iter()
                .filter(|w| w.a_sq == big(*a_sq))
                .map(|w| format!("b={} disc={}", w.av, w.disc))
                .collect();
            for &x in bs {
                if walls::Wall::new(&big(vsq), &big(*a_sq), &big(x)).is_err() {
                    got.push(format!("b={x} disc={} degenerate", a_sq * vsq - x * x));
                }
            }
            got.sort_by_key(|t| t[2..t.find(' ').unwrap_or(t.len())].parse::<i64>().unwrap_or(0));
            let want: Vec<String> = bs
                .iter()
                .map(|&x| {
                    let tag = if degenerate(*a_sq, x) { " degenerate" } else { "" };
                    format!("b={} disc={}{}", x, a_sq * vsq - x * x, tag)
                })
                .collect();
            walls_expected += bs.iter().filter(|&&x| !degenerate(*a_sq, x)).count();
            b.add(2, &format!("disc.v{vsq}.a2={a_sq}"), &cite, want.join(", "), got.join(", "));
        }
        b.add(2, &format!("disc.v{vsq}.walls"), &cite, walls_expected, computed.len());
        let pos: Vec<String> = computed.iter().filter(|w| w.a_sq == big(2)).map(|w| w.av.to_string()).collect();
        let listed: Vec<String> = groups[2].1.iter().map(|x| x.to_string()).collect();
        b.add(2, &format!("disc.v{vsq}.positive_a2"), &cite, listed.join(","), pos.join(","));
    }
    Ok(())
}

fn lagrangian_n15(b: &mut Builder) -> Result<(), CliError> {
    let cite = "Lagrangian ℙ¹⁵ with a second orbit, n = 15";
    let g = walls::lagrangian_lattice(15)?;
    b.add(3, "lagr15.G", cite, "(28 14; 14 -2)", form_text(&g));
    b.add(3, "lagr15.discG", cite, -252, g.disc());
    let embs = walls::find_index_embeddings(&g, &big(28))?;
    let three: Vec<_> = embs.iter().filter(|e| e.index == big(3)).collect();
    let h = three.first().map(|e| e.overlattice.clone());
    b.add(3, "lagr15.index3.count", cite, 1, three.len());
    b.add(3, "lagr15.H", cite, "(28 14; 14 6)", h.as_ref().map(form_text).unwrap_or_default());
    b.add(3, "lagr15.discH", cite, -28, h.as_ref().map(|h| h.disc().to_string()).unwrap_or_default());
    // a = 3w − v where w is the new generator
    b.add(3, "lagr15.a_image", cite, "[-1, 3]", three.first().map(|e| vec_text(&e.a_image)).unwrap_or_default());
    if let Some(h) = h {
        let w = walls::Wall::new(&big(28), &h.c, &h.b)?;
        b.add(3, "lagr15.second_codim", cite, 7, &w.a_vma - 1);
    }
    Ok(())
}

fn decomposition_example(b: &mut Builder, search_box: u64) -> Result<(), CliError> {
    let cite = "spherical classes of H = (10 5; 5 2)";
    let h = BinaryForm::from_i64(10, 5, 2)?;
    let v = (big(1), big(0));
    let pv = |x: &(BigInt, BigInt)| h.pair((&v.0, &v.1), (&x.0, &x.1));
    // (coefficient of v, coefficient of a, square, (v, b))
    let table: [(i64, i64, i64, i64); 10] = [
        (-1, 2, -2, 0),
        (-1, 3, -2, 5),
        (-2, 7, -2, 15),
        (-1, 4, 2, 10),
        (0, 1, 2, 5),
        (1, -1, 2, 5),
        (3, -4, 2, 10),
        (5, -7, -2, 15),
        (2, -3, -2, 5),
        (1, -2, -2, 0),
    ];
    let mut want: Vec<String> = table.iter().map(|t| format!("({},{}):{}:{}", t.0, t.1, t.2, t.3)).collect();
    want.sort();
    let mut got = Vec::new();
    for m in [-2, 2] {
        for x in forms::solve(&h, &big(m), search_box) {
            let p = pv(&x);
            if p >= big(0) && p <= big(15) {
                got.push(format!("({},{}):{}:{}", x.0, x.1, m, p));
            }
        }
    }
    got.sort();
    b.add(4, "sph.table", cite, want.join(" "), got.join(" "));
    let s1 = (big(1), big(-2));
    let s2 = (big(2), big(-3));
    let s3 = (big(-1), big(3));
    let pair = |x: &(BigInt, BigInt), y: &(BigInt, BigInt)| h.pair((&x.0, &x.1), (&y.0, &y.1));
    b.add(4, "sph.v.s1", cite, 0, pv(&s1));
    b.add(4, "sph.v.s2", cite, 5, pv(&s2));
    b.add(4, "sph.v.s3", cite, 5, pv(&s3));
    b.add(4, "sph.s2.s3", cite, 7, pair(&s2, &s3));
    let r = walls::analyze_decomposition(&h, &LatticeVector::new(vec![s3.0.clone(), s3.1.clone()]), 1, search_box)?;
    let ob = r.obstruction.as_ref();
    b.add(4, "sph.kind", cite, "non_basic", kind_text(r.kind));
    b.add(4, "sph.witness", cite, "[1, -2]", ob.and_then(|o| o.witness.as_ref()).map(|w| vec_text(&w.coords)).unwrap_or_default());
    b.add(4, "sph.witness_pairing", cite, -3, ob.map(|o| o.pairing.to_string()).unwrap_or_default());
    Ok(())
}

fn kind_text(k: DecompositionKind) -> &'static str {
    match k {
        DecompositionKind::HilbertChow => "hilbert_chow",
        DecompositionKind::Irreducible => "irreducible",
        DecompositionKind::NonBasic => "non_basic",
    }
}

pub fn form_text(f: &BinaryForm) -> String {
    format!("({} {}; {} {})", f.a, f.b, f.b, f.c)
}

fn vec_text(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn ray_text(r: &SecondRay) -> String {
    match r {
        SecondRay::Wall(w) => class_text(&w.ray.s, &w.ray.t),
        SecondRay::PositiveConeBoundary { .. } => "boundary".into(),
    }
}

fn degree_114(b: &mut Builder, cfg: &Config) -> Result<(), CliError> {
    let cite = "degree 114 worked example on S^[3]";
    let cf = surd_cf(&big(114), &big(2), 0)?;
    let mut q = vec![cf.partial_quotients[0].to_string()];
    q.extend(cf.period().iter().map(|x| x.to_string()));
    b.add(5, "d114.cf", cite, "[5; 2, 1, 20, 1, 2, 10]", format!("[{}; {}]", q[0], q[1..].join(", ")));
    let setup = PicardSetup::from_i64(3, 114)?;
    let window = cfg.window_override.clone().unwrap_or_else(|| setup.window()).abs();
    let rows = mori::small_norm_table(&setup, &window, None)?;
    let got: Vec<String> = rows.iter().map(|r| format!("({},{},{})", r.a, r.b, r.value)).collect();
    b.add(
        5,
        "d114.table",
        cite,
        "(1,5,14) (2,11,-28) (3,16,2) (62,331,-28) (65,347,14) (127,678,-30) (192,1025,-4)",
        got.join(" "),
    );
    let m = mori::mori_generators(&setup)?;
    b.add(5, "d114.mori", cite, "192f − 1025δ", ray_text(&m.second_ray));
    let rep = mori::is_ample_with(&setup, &m, &big(3), &big(16));
    b.add(5, "d114.g_ample", cite, true, rep.ample);
    b.add(5, "d114.g_square", cite, 2, &rep.square);
    b.add(5, "d114.g_pairing", cite, 64, rep.second_ray_pairing.map(|p| p.to_string()).unwrap_or_default());
    let hits = monodromy::find_involution_degree(&big(114), 2)?;
    b.add(5, "d114.involution_first_hit", cite, 114, hits.first().map(|h| h.f_sq.to_string()).unwrap_or_default());
    let h114 = hits.iter().find(|h| h.f_sq == big(114));
    b.add(5, "d114.involution_g", cite, "3f − 16δ", h114.map(|h| class_text(&h.x, &h.y)).unwrap_or_default());
    Ok(())
}

fn degree_6(b: &mut Builder) -> Result<(), CliError> {
    let cite = "degree 6 collinear-triple example on S^[3]";
    let setup = PicardSetup::from_i64(3, 6)?;
    let rep = mori::is_ample(&setup, &big(1), &big(1))?;
    b.add(6, "d6.g_square", cite, 2, &rep.square);
    b.add(6, "d6.g_ample", cite, false, rep.ample);
    b.add(6, "d6.offending_ray", cite, "2f − 3δ", ray_text(&rep.second_ray));
    b.add(6, "d6.g_pairing", cite, 0, rep.second_ray_pairing.map(|p| p.to_string()).unwrap_or_default());
    let refl = monodromy::reflect_pic(&setup, &big(1), &big(1))?;
    b.flag(6, "d6.reflection_involution", cite, refl.is_involution());
    Ok(())
}

fn ambiguity(b: &mut Builder) -> Result<(), CliError> {
    let cite = "ample cone ambiguity on Λ₇";
    let v = monodromy::ambiguity_pipeline(7)?;
    b.flag(7, "amb.alpha_isometry", cite, monodromy::build_alpha_n7().is_ok());
    b.add(7, "amb.disc_unit", cite, 5, &v.alpha_report.disc_unit);
    b.add(7, "amb.unit_squared_mod24", cite, 1, &v.alpha_unit_squared);
    b.add(7, "amb.is_monodromy", cite, false, v.alpha_report.is_monodromy);
    b.add(7, "amb.a_prime", cite, "[5, -30, -12, 12]", vec_text(&v.a_prime.coords));
    b.add(7, "amb.alpha_a_prime", cite, "[25, -150, 72, 48]", vec_text(&v.alpha_a_prime.coords));
    b.add(7, "amb.b", cite, "[2, -13, 6, 4]", vec_text(&v.b.coords));
    b.add(7, "amb.H1", cite, "(12 5; 5 -2)", form_text(&v.wall_in));
    b.add(7, "amb.H2", cite, "(12 -1; -1 -4)", form_text(&v.image_lattice));
    b.add(7, "amb.disc", cite, -49, v.image_lattice.disc());
    b.add(7, "amb.H1_reduced", cite, "(0 7; 7 -2)", form_text(&v.wall_in_reduced));
    b.add(7, "amb.H2_reduced", cite, "(0 7; 7 -4)", form_text(&v.image_reduced));
    let hits: Vec<String> = v.classification_hits.iter().map(|w| format!("({}, {})", w.a_sq, w.av)).collect();
    b.add(7, "amb.hits", cite, "(-2, 5)", hits.join(" "));
    b.add(7, "amb.equivalent", cite, false, v.equivalent_to_some_wall);
    b.add(7, "amb.verdict", cite, "image ray not extremal; ample cones differ", conclusion_text(v.conclusion));
    Ok(())
}

fn random_gl2(rng: &mut ChaCha8Rng) -> Mat2 {
    let gens = [mat2(1, 1, 0, 1), mat2(1, 0, 1, 1), mat2(0, 1, 1, 0), mat2(1, -1, 0, 1), mat2(-1, 0, 0, 1)];
    let mut t = mat2(1, 0, 0, 1);
    for _ in 0..rng.gen_range(1..12) {
        t = mat2_mul(&t, &gens[rng.gen_range(0..gens.len())]);
    }
    t
}

fn grid() -> Vec<(u64, i64)> {
    (2..=5u64).flat_map(|n| (2..=200).step_by(2).map(move |f| (n, f))).collect()
}

fn properties(b: &mut Builder, seed: u64) -> Result<(), CliError> {
    let cite = "window bound and extremal-ray properties, n ≤ 5, f² ≤ 200";
    let results: Vec<(bool, bool)> = grid()
        .par_iter()
        .map(|&(n, f)| -> Result<(bool, bool), CliError> {
            let s = PicardSetup::from_i64(n, f)?;
            let w = mori::enumerate_walls_rank3(&s, 40)?;
            let c = bound_window(n);
            let window_ok = w.walls.iter().all(|x| {
                x.rho_sq >= c && BigInt::from(2) * &x.rho_sq >= -BigInt::from(n + 3) * &x.dv * &x.dv
            });
            let p = mori::mori_generators(&s)?;
            let e = mori::mori_generators_exhaustive(&s, 10_000_000)?;
            Ok((window_ok, p.second_ray.wall_ray() == e.second_ray.wall_ray()))
        })
        .collect::<Result<_, _>>()?;
    b.add(8, "prop.window", cite, results.len(), results.iter().filter(|r| r.0).count());
    b.add(8, "prop.exhaustive_vs_convergent", cite, results.len(), results.iter().filter(|r| r.1).count());
    let n3: Vec<bool> = (2..=200i64)
        .step_by(2)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&f| -> Result<bool, CliError> {
            let s = PicardSetup::from_i64(3, f)?;
            let m = mori::mori_generators(&s)?;
            Ok(m.second_ray.wall_ray() == mori::n3_second_ray(&big(f))?.as_ref())
        })
        .collect::<Result<_, _>>()?;
    b.add(8, "prop.n3_conditions", cite, n3.len(), n3.iter().filter(|x| **x).count());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases = [(3u64, 114i64, 192i64, 1025i64), (3, 6, 2, 3), (4, 10, 3, 2), (2, 18, 1, 3)];
    let mut stable = 0;
    for i in 0..100 {
        let (n, f, s, t) = cases[i % cases.len()];
        let mukai = MarkedMukaiSetup::new(n, None)?;
        let setup = PicardSetup::from_i64(n, f)?;
        let x0 = orbits::embed_ray(&mukai, &setup, &Ray { s: big(s), t: big(t) })?;
        let inv = orbits::orbit_invariants(&mukai, &x0)?;
        let gens = orbits::monodromy_generators(&mukai)?;
        let mut x = x0;
        for _ in 0..rng.gen_range(1..20) {
            x = orbits::apply_generator(&mukai, &gens[rng.gen_range(0..gens.len())], &x)?;
        }
        stable += usize::from(orbits::orbit_invariants(&mukai, &x)? == inv);
    }
    b.add(8, "prop.orbit_words", "orbit invariants under generator words", 100, stable);

    let h1 = BinaryForm::from_i64(12, 5, -2)?;
    let h2 = BinaryForm::from_i64(12, -1, -4)?;
    let (r1, r2) = (reduce(&h1)?.reduced, reduce(&h2)?.reduced);
    let mut ok = 0;
    for _ in 0..100 {
        let s1 = h1.transform(&random_gl2(&mut rng));
        let s2 = h2.transform(&random_gl2(&mut rng));
        let good = reduce(&s1)?.reduced == r1
            && reduce(&s2)?.reduced == r2
            && forms::equivalent(&s1, &h1)?
            && !forms::equivalent(&s1, &s2)?;
        ok += usize::from(good);
    }
    b.add(8, "prop.gl2_scrambles", "reduction under GL₂(ℤ) scrambles", 100, ok);
    Ok(())
}

fn designs(b: &mut Builder, over: &mut Vec<String>) -> Result<(), CliError> {
    let cite = "degree construction for a prescribed extremal ray";
    for n in [2u64, 3] {
        let adm = orbits::admissible_rho_sq(n, &big(1))?;
        for a in adm {
            let id = format!("design.n{n}.s1.rho{}", a.rho_sq);
            let start = Instant::now();
            for t_res in &a.t_residues {
                let c = orbits::design_degree(n, &big(1), t_res, &a.rho_sq, &big(1_000_000))?;
                let setup = PicardSetup::new(n, c.f_sq.clone())?;
                let e = mori::mori_generators_exhaustive(&setup, 10_000_000)?;
                let ray = Ray { s: c.s.clone(), t: c.t.clone() };
                b.add(9, &format!("{id}.t{t_res}.reverified"), cite, class_text(&ray.s, &ray.t), ray_text(&e.second_ray));
                b.add(9, &format!("{id}.t{t_res}.square"), cite, &a.rho_sq, ray.square(&setup));
            }
            if start.elapsed() > DESIGN_BUDGET {
                over.push(id);
            }
        }
    }
    Ok(())
}

pub fn noted_deviations() -> Vec<Deviation> {
    vec![
        Deviation {
            id: "window-inclusive".into(),
            description: "the ray-square window C = −2(n−1)²(n+3) is used inclusively; the Lagrangian ℙ² ray attains ρ² = −10 = C for n = 2".into(),
        },
        Deviation {
            id: "a-prime".into(),
            description: "a′ is the primitive generator of (a,v)v − (v,v)a = 5v − 12a = 5δ − 12e₂ + 12f₂; the alternative a′ = v − 5a is not orthogonal to v".into(),
        },
        Deviation {
            id: "involution-first-hit".into(),
            description: "the first even f² ≤ 114 with an ample square-2 class on S^[3] is 38 (g = f − 3δ, R = 12f − 37δ, g·R = 12); 114 is a hit but not the first".into(),
        },
    ]
}

pub fn run(cfg: &Config, seed: u64) -> Result<PaperCheckReport, CliError> {
    let mut b = Builder { checks: Vec::new() };
    let mut over = Vec::new();
    wall_tables(&mut b)?;
    discriminant_lists(&mut b)?;
    lagrangian_n15(&mut b)?;
    decomposition_example(&mut b, cfg.search_box)?;
    degree_114(&mut b, cfg)?;
    degree_6(&mut b)?;
    ambiguity(&mut b)?;
    properties(&mut b, seed)?;
    designs(&mut b, &mut over)?;
    let mut degraded_reasons = Vec::new();
    if let Some(w) = &cfg.window_override {
        if *w < bound_window(3) {
            degraded_reasons.push(format!("window_override {w} is below the n = 3 bound {}", bound_window(3)));
        }
    }
    let mismatches = b.checks.iter().filter(|c| !c.matched).map(|c| c.id.clone()).collect();
    Ok(PaperCheckReport {
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.clone(),
        seed,
        checks: b.checks,
        mismatches,
        noted_deviations: noted_deviations(),
        degraded: !degraded_reasons.is_empty(),
        degraded_reasons,
        over_budget: over,
    })
}
