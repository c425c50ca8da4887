//! DiV file format (versioned JSON) and SVG export.

use serde::{Deserialize, Serialize};

use crate::error::IoError;
use crate::geom::Point;
use crate::tiling::{Div, SideLabel, Tile, Word};

pub const FORMAT_VERSION: u32 = 1;

/// On-disk form of a volume: the tile, the side-label assignment, and the
/// gluing words (strings over `{a,b,c}`, rightmost letter applied first;
/// `"e"` is the empty word).
#[derive(Debug, Serialize, Deserialize)]
pub struct DivFile {
    pub format_version: u32,
    /// Six floats: `[[x0,y0],[x1,y1],[x2,y2]]`; vertex `i` is opposite side `i`.
    pub tile_vertices: [[f64; 2]; 3],
    /// Label of side `i`, e.g. `["a","b","c"]`.
    pub side_labels: [String; 3],
    pub words: Vec<String>,
}

impl DivFile {
    pub fn from_div(div: &Div) -> DivFile {
        let t = div.tile();
        DivFile {
            format_version: FORMAT_VERSION,
            tile_vertices: [
                [t.vertices()[0].x, t.vertices()[0].y],
                [t.vertices()[1].x, t.vertices()[1].y],
                [t.vertices()[2].x, t.vertices()[2].y],
            ],
            side_labels: [
                t.labels()[0].to_string(),
                t.labels()[1].to_string(),
                t.labels()[2].to_string(),
            ],
            words: div.words().iter().map(|w| w.to_string()).collect(),
        }
    }

    pub fn into_div(self) -> Result<Div, IoError> {
        if self.format_version != FORMAT_VERSION {
            return Err(IoError::FormatVersion(self.format_version, FORMAT_VERSION));
        }
        let vertices = [
            Point::new(self.tile_vertices[0][0], self.tile_vertices[0][1]),
            Point::new(self.tile_vertices[1][0], self.tile_vertices[1][1]),
            Point::new(self.tile_vertices[2][0], self.tile_vertices[2][1]),
        ];
        let mut labels = [SideLabel::A; 3];
        for (i, s) in self.side_labels.iter().enumerate() {
            let c = s.chars().next().unwrap_or(' ');
            labels[i] = SideLabel::from_char(c)
                .ok_or_else(|| IoError::Invalid(format!("side label {s:?}")))?;
        }
        let tile = Tile::with_labels(vertices, labels)?;
        let words = self
            .words
            .iter()
            .map(|s| s.parse::<Word>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Div::build(tile, &words)?)
    }
}

pub fn div_to_json(div: &Div) -> String {
    serde_json::to_string_pretty(&DivFile::from_div(div)).expect("serialization cannot fail")
}

pub fn div_from_json(text: &str) -> Result<Div, IoError> {
    let file: DivFile = serde_json::from_str(text)?;
    file.into_div()
}

/// Renders the glued volume as SVG. Side styling follows the drawing
/// convention: `a` solid, `b` dashed, `c` dotted.
pub fn div_to_svg(div: &Div) -> String {
    let tile = div.tile();
    let mut min = Point::new(f64::MAX, f64::MAX);
    let mut max = Point::new(f64::MIN, f64::MIN);
    for p in div.placements() {
        for v in p.triangle(tile) {
            min.x = min.x.min(v.x);
            min.y = min.y.min(v.y);
            max.x = max.x.max(v.x);
            max.y = max.y.max(v.y);
        }
    }
    let pad = 0.08 * tile.diameter();
    let w = max.x - min.x + 2.0 * pad;
    let h = max.y - min.y + 2.0 * pad;
    let scale = 400.0 / w.max(h);
    // SVG y grows downward; flip
    let tx = |p: Point| ((p.x - min.x + pad) * scale, (max.y - p.y + pad) * scale);
    let dash = |l: SideLabel| match l {
        SideLabel::A => "",
        SideLabel::B => " stroke-dasharray=\"9,6\"",
        SideLabel::C => " stroke-dasharray=\"2,5\"",
    };
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.2} {:.2}\">\n",
        w * scale, h * scale, w * scale, h * scale,
    ));
    for p in div.placements() {
        let tri = p.triangle(tile);
        let pts: Vec<(f64, f64)> = tri.iter().map(|&v| tx(v)).collect();
        svg.push_str(&format!(
            "  <polygon points=\"{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}\" fill=\"#f4f0e8\" stroke=\"none\"/>\n",
            pts[0].0, pts[0].1, pts[1].0, pts[1].1, pts[2].0, pts[2].1
        ));
        let c = ((tri[0] + tri[1] + tri[2]) / 3.0, ());
        let (cx, cy) = tx(c.0);
        svg.push_str(&format!(
            "  <text x=\"{cx:.2}\" y=\"{cy:.2}\" font-size=\"{:.1}\" text-anchor=\"middle\">{}</text>\n",
            0.25 * tile.diameter() * scale,
            p.copy + 1
        ));
    }
    for p in div.placements() {
        for label in SideLabel::ALL {
            let side = tile.side_of(label);
            let (a, b) = tile.side_endpoints(side);
            let (pa, pb) = (tx(p.iso.apply(a)), tx(p.iso.apply(b)));
            svg.push_str(&format!(
                "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#222\" stroke-width=\"1.6\"{}/>\n",
                pa.0, pa.1, pb.0, pb.1, dash(label)
            ));
        }
    }
    svg.push_str("</svg>\n");
    svg
}
