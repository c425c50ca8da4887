//! Versioned JSON forms of censuses and pair reports.

use serde::{Deserialize, Serialize};

use crate::algebra::GraphSignature;
use crate::error::IoError;
use crate::tiling::{Div, DivFile, Tile, Word};

use super::{Census, CensusClass, PairReport};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
pub struct CensusClassFile {
    pub index: usize,
    pub representative_words: Vec<String>,
    pub size: usize,
    pub group_order: u64,
    pub internal_sides: usize,
    pub external_counts: [usize; 3],
    pub degrees: Vec<usize>,
    pub color_counts: [usize; 3],
    pub path_lengths: Vec<usize>,
    pub spectrum: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CensusFile {
    pub format_version: u32,
    pub tile_vertices: [[f64; 2]; 3],
    pub side_labels: [String; 3],
    pub n: usize,
    pub div_count: usize,
    pub class_count: usize,
    pub tree_class_count: usize,
    pub color_class_count: usize,
    pub tree_color_class_count: usize,
    pub classes: Vec<CensusClassFile>,
}

impl CensusFile {
    pub fn from_census(census: &Census, tile: &Tile) -> CensusFile {
        let proto = DivFile::from_div(
            &Div::build(tile.clone(), &[Word::empty()]).expect("single copy always builds"),
        );
        CensusFile {
            format_version: FORMAT_VERSION,
            tile_vertices: proto.tile_vertices,
            side_labels: proto.side_labels,
            n: census.n,
            div_count: census.div_count,
            class_count: census.classes.len(),
            tree_class_count: census.tree_class_count,
            color_class_count: census.color_class_count,
            tree_color_class_count: census.tree_color_class_count,
            classes: census
                .classes
                .iter()
                .enumerate()
                .map(|(index, c)| CensusClassFile {
                    index,
                    representative_words: c
                        .representative
                        .words()
                        .iter()
                        .map(|w| w.to_string())
                        .collect(),
                    size: c.size,
                    group_order: c.group_order,
                    internal_sides: c.internal_sides,
                    external_counts: c.external_counts,
                    degrees: c.signature.degrees.clone(),
                    color_counts: c.signature.color_counts,
                    path_lengths: c.signature.path_lengths.clone(),
                    spectrum: c.spectrum.clone(),
                })
                .collect(),
        }
    }

    /// Rebuilds the in-memory census; representative volumes are
    /// reconstructed from their word lists.
    pub fn into_census(self) -> Result<(Census, Tile), IoError> {
        if self.format_version != FORMAT_VERSION {
            return Err(IoError::FormatVersion(self.format_version, FORMAT_VERSION));
        }
        let tile_file = DivFile {
            format_version: crate::tiling::FORMAT_VERSION,
            tile_vertices: self.tile_vertices,
            side_labels: self.side_labels.clone(),
            words: vec!["e".into()],
        };
        let tile = tile_file.into_div()?.tile().clone();
        let mut classes = Vec::with_capacity(self.classes.len());
        for c in self.classes {
            let words = c
                .representative_words
                .iter()
                .map(|s| s.parse::<Word>())
                .collect::<Result<Vec<_>, _>>()?;
            let representative = Div::build(tile.clone(), &words)?;
            classes.push(CensusClass {
                representative,
                size: c.size,
                signature: GraphSignature {
                    degrees: c.degrees,
                    color_counts: c.color_counts,
                    path_lengths: c.path_lengths,
                },
                group_order: c.group_order,
                spectrum: c.spectrum,
                internal_sides: c.internal_sides,
                external_counts: c.external_counts,
            });
        }
        Ok((
            Census {
                n: self.n,
                div_count: self.div_count,
                tree_class_count: self.tree_class_count,
                color_class_count: self.color_class_count,
                tree_color_class_count: self.tree_color_class_count,
                classes,
            },
            tile,
        ))
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PairsFile {
    pub format_version: u32,
    pub tol: f64,
    pub pairs: Vec<PairReport>,
}

pub fn census_to_json(census: &Census, tile: &Tile) -> String {
    serde_json::to_string_pretty(&CensusFile::from_census(census, tile))
        .expect("serialization cannot fail")
}

pub fn census_from_json(text: &str) -> Result<(Census, Tile), IoError> {
    let file: CensusFile = serde_json::from_str(text)?;
    file.into_census()
}
