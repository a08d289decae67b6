//! Bundled census triangulations and reduced state-sum formulas.
//!
//! Gluing tables are transcribed from the SnapPy/Regina cusped census and
//! stored under `fixtures/` so everything runs offline.

use crate::oracle::ReducedFormula;
use crate::perm::Perm4;
use crate::triangulation::{Gluing, Triangulation};

/// Census manifolds shipped with the crate.
pub const CENSUS_NAMES: [&str; 8] = ["m003", "m004", "m006", "m007", "m009", "m010", "s778", "s788"];

fn census_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "m003" => include_str!("../fixtures/census/m003.json"),
        "m004" => include_str!("../fixtures/census/m004.json"),
        "m006" => include_str!("../fixtures/census/m006.json"),
        "m007" => include_str!("../fixtures/census/m007.json"),
        "m009" => include_str!("../fixtures/census/m009.json"),
        "m010" => include_str!("../fixtures/census/m010.json"),
        "s778" => include_str!("../fixtures/census/s778.json"),
        "s788" => include_str!("../fixtures/census/s788.json"),
        _ => return None,
    })
}

fn reduced_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "m003" => include_str!("../fixtures/reduced/m003.json"),
        "m004" => include_str!("../fixtures/reduced/m004.json"),
        "m006" => include_str!("../fixtures/reduced/m006.json"),
        "m007" => include_str!("../fixtures/reduced/m007.json"),
        "m009" => include_str!("../fixtures/reduced/m009.json"),
        "m010" => include_str!("../fixtures/reduced/m010.json"),
        "s778" => include_str!("../fixtures/reduced/s778.json"),
        "s788" => include_str!("../fixtures/reduced/s788.json"),
        _ => return None,
    })
}

/// The census triangulation called `name`, or `None` if it is not bundled.
pub fn census(name: &str) -> Option<Triangulation> {
    census_text(name).map(|text| Triangulation::from_json(text).expect("bundled census fixture is valid"))
}

/// Hand-reduced state-sum formula for the census manifold `name`.
pub fn reduced_formula(name: &str) -> Option<ReducedFormula> {
    reduced_text(name).map(|text| ReducedFormula::from_json(text).expect("bundled formula is valid"))
}

/// Two tetrahedra glued face to face by the identity: a triangulation of the 3-sphere.
pub fn s3_double() -> Triangulation {
    Triangulation::from_json(include_str!("../fixtures/s3_double.json")).expect("bundled S3 fixture is valid")
}

/// The one-tetrahedron Gieseking manifold (non-orientable, so returned as a raw table).
pub fn gieseking_gluings() -> Vec<[Gluing; 4]> {
    let g = |tet, images| Gluing { tet, perm: Perm4::new(images).unwrap() };
    vec![[g(0, [1, 3, 2, 0]), g(0, [3, 0, 2, 1]), g(0, [2, 1, 3, 0]), g(0, [3, 1, 0, 2])]]
}

/// Every bundled orientable fixture, census first, then the double-tetrahedron sphere.
pub fn all() -> Vec<(&'static str, Triangulation)> {
    let mut out: Vec<_> = CENSUS_NAMES.iter().map(|&n| (n, census(n).unwrap())).collect();
    out.push(("s3_double", s3_double()));
    out
}
