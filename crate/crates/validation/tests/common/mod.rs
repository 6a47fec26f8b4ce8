#![allow(dead_code)]

use std::path::PathBuf;

use movcone_core::cone_dynamics::{CYModel, Geometry};
use movcone_core::hilbert_oracle::IdealSpec;
use movcone_core::model_file::ModelFile;

pub fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

pub fn model_file(name: &str) -> ModelFile {
    ModelFile::load(&models_dir().join(format!("{name}.model"))).unwrap()
}

pub fn model(name: &str) -> CYModel {
    model_file(name).to_model().unwrap()
}

pub fn geometry(name: &str) -> Geometry {
    Geometry::new(model(name)).unwrap()
}

pub fn ideal(name: &str) -> IdealSpec {
    model_file(name).load_ideal(&models_dir()).unwrap().unwrap()
}

pub const BUNDLED: [&str; 3] = ["example41", "oguiso", "synthetic-bminus-empty"];
