//! Tile input: builtin names or a small JSON file.

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use div_core::fixtures;
use div_core::tiling::SideLabel;
use div_core::{Point, Tile};

pub const FORMAT_VERSION: u32 = 1;

/// Tile file: three vertices (vertex `i` opposite side `i`) and the label
/// of each side.
#[derive(Debug, Serialize, Deserialize)]
pub struct TileFile {
    pub format_version: u32,
    pub vertices: [[f64; 2]; 3],
    #[serde(default = "default_labels")]
    pub side_labels: [String; 3],
}

fn default_labels() -> [String; 3] {
    ["a".into(), "b".into(), "c".into()]
}

impl TileFile {
    pub fn into_tile(self) -> Result<Tile> {
        anyhow::ensure!(
            self.format_version == FORMAT_VERSION,
            "unsupported tile format_version {} (expected {FORMAT_VERSION})",
            self.format_version
        );
        let vertices = [
            Point::new(self.vertices[0][0], self.vertices[0][1]),
            Point::new(self.vertices[1][0], self.vertices[1][1]),
            Point::new(self.vertices[2][0], self.vertices[2][1]),
        ];
        let mut labels = [SideLabel::A; 3];
        for (i, s) in self.side_labels.iter().enumerate() {
            labels[i] = SideLabel::from_char(s.chars().next().unwrap_or(' '))
                .with_context(|| format!("bad side label {s:?}"))?;
        }
        Ok(Tile::with_labels(vertices, labels)?)
    }

}

/// Accepts a builtin name (`equilateral`, `scalene`, `isosceles`) or a path
/// to a tile JSON file.
pub fn load_tile(spec: &str) -> Result<Tile> {
    match spec {
        "equilateral" => Ok(fixtures::equilateral_tile()),
        "scalene" => Ok(fixtures::scalene_tile()),
        "isosceles" => Ok(fixtures::isosceles_tile()),
        path => {
            let text =
                std::fs::read_to_string(path).with_context(|| format!("reading tile {path}"))?;
            let file: TileFile = serde_json::from_str(&text)?;
            file.into_tile()
        }
    }
}
