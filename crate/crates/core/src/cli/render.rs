//! Plain-text image outputs: PGM (P2) grids and SVG scatter plots.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Grey level of the gaps between tiles.
const GAP_LEVEL: u8 = 128;
const GAP: usize = 2;

/// A rectangular block of intensities in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tile {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
}

impl Tile {
    /// Square tile when `values.len()` is a perfect square, a one-row strip
    /// otherwise.
    pub fn auto(values: Vec<f64>) -> Tile {
        let n = values.len();
        let side = (n as f64).sqrt().round() as usize;
        let (width, height) = if side * side == n { (side, side) } else { (n, 1) };
        Tile { width, height, values }
    }
}

/// Rescales `values` from `[lo, hi]` onto `[0, 1]`.
pub fn rescale_unit(values: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let span = if hi > lo { hi - lo } else { 1.0 };
    values.iter().map(|v| (v - lo) / span).collect()
}

/// Grey-level image with 8-bit depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

fn level(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

impl GrayImage {
    /// Lays out each inner vector as one row of tiles, separated by gaps.
    pub fn grid(rows: &[Vec<Tile>]) -> GrayImage {
        let row_heights: Vec<usize> = rows.iter().map(|r| r.iter().map(|t| t.height).max().unwrap_or(0)).collect();
        let row_widths: Vec<usize> = rows
            .iter()
            .map(|r| r.iter().map(|t| t.width + GAP).sum::<usize>() + GAP)
            .collect();
        let width = row_widths.iter().copied().max().unwrap_or(GAP);
        let height = row_heights.iter().map(|h| h + GAP).sum::<usize>() + GAP;
        let mut pixels = vec![GAP_LEVEL; width * height];
        let mut y0 = GAP;
        for (r, row) in rows.iter().enumerate() {
            let mut x0 = GAP;
            for tile in row {
                for ty in 0..tile.height {
                    for tx in 0..tile.width {
                        pixels[(y0 + ty) * width + x0 + tx] = level(tile.values[ty * tile.width + tx]);
                    }
                }
                x0 += tile.width + GAP;
            }
            y0 += row_heights[r] + GAP;
        }
        GrayImage { width, height, pixels }
    }

    /// Plain PGM with maxval 255 and lines of at most 70 characters.
    pub fn to_pgm(&self) -> String {
        let mut out = format!("P2\n{} {}\n255\n", self.width, self.height);
        for row in self.pixels.chunks(self.width.max(1)) {
            let mut line = String::new();
            for p in row {
                let token = p.to_string();
                if !line.is_empty() && line.len() + 1 + token.len() > 70 {
                    out.push_str(&line);
                    out.push('\n');
                    line.clear();
                }
                if !line.is_empty() {
                    line.push(' ');
                }
                line.push_str(&token);
            }
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn parse_pgm(text: &str) -> Result<GrayImage> {
        let bad = |m: &str| Error::Format {
            path: "pgm".into(),
            message: m.into(),
        };
        let mut tokens = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace);
        if tokens.next() != Some("P2") {
            return Err(bad("missing P2 header"));
        }
        let mut number = |what: &str| -> Result<usize> {
            tokens
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad(&format!("missing or invalid {what}")))
        };
        let width = number("width")?;
        let height = number("height")?;
        if number("maxval")? != 255 {
            return Err(bad("maxval must be 255"));
        }
        let mut pixels = Vec::with_capacity(width * height);
        for _ in 0..width * height {
            let v = number("pixel")?;
            pixels.push(u8::try_from(v).map_err(|_| bad("pixel above 255"))?);
        }
        Ok(GrayImage { width, height, pixels })
    }
}

/// Original samples, codes and reconstructions as three rows of tiles.
///
/// `code_range` maps code values onto grey levels; pass the encoding
/// activation's bounds, or `None` to use the observed extremes.
pub fn reconstruction_grid(
    originals: &Matrix,
    codes: &Matrix,
    reconstructions: &Matrix,
    code_range: Option<(f64, f64)>,
) -> Result<GrayImage> {
    if originals.shape() != reconstructions.shape() || codes.rows() != originals.rows() {
        return Err(Error::shape("reconstruction_grid", originals.shape(), reconstructions.shape()));
    }
    let (lo, hi) = code_range.unwrap_or_else(|| {
        let s = codes.as_slice();
        (
            s.iter().copied().fold(f64::INFINITY, f64::min),
            s.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        )
    });
    let rows = vec![
        originals.row_iter().map(|r| Tile::auto(r.to_vec())).collect(),
        codes.row_iter().map(|r| Tile::auto(rescale_unit(r, lo, hi))).collect(),
        reconstructions.row_iter().map(|r| Tile::auto(r.to_vec())).collect(),
    ];
    Ok(GrayImage::grid(&rows))
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
    "#17becf",
];

/// Two-dimensional scatter plot, one colour per class, axes `V1` and `V2`.
pub fn scatter_svg(points: &Matrix, labels: &[i64], title: &str) -> Result<String> {
    if points.cols() != 2 {
        return Err(Error::InvalidArgument(format!(
            "scatter needs 2-D codes, got {} columns; train with --encoding-dim 2",
            points.cols()
        )));
    }
    if points.rows() == 0 {
        return Err(Error::Empty("no points to plot".into()));
    }
    if labels.len() != points.rows() {
        return Err(Error::InvalidArgument(format!("{} labels for {} points", labels.len(), points.rows())));
    }
    let (size, margin) = (480.0, 50.0);
    let plot = size - 2.0 * margin;
    let range = |j: usize| {
        let col: Vec<f64> = points.row_iter().map(|r| r[j]).collect();
        let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, hi + 0.5)
        }
    };
    let (x0, x1) = range(0);
    let (y0, y1) = range(1);
    let mut classes: Vec<i64> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();

    let mut svg = String::new();
    let w = &mut svg;
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    )
    .unwrap();
    writeln!(w, r#"<title>{}</title>"#, escape(title)).unwrap();
    writeln!(w, r#"<rect width="{size}" height="{size}" fill="white"/>"#).unwrap();
    writeln!(
        w,
        r#"<rect x="{margin}" y="{margin}" width="{plot}" height="{plot}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    writeln!(
        w,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="14">V1</text>"#,
        size / 2.0,
        size - 15.0
    )
    .unwrap();
    writeln!(
        w,
        r#"<text x="15" y="{0}" text-anchor="middle" font-family="sans-serif" font-size="14" transform="rotate(-90 15 {0})">V2</text>"#,
        size / 2.0
    )
    .unwrap();
    for (c, class) in classes.iter().enumerate() {
        let colour = PALETTE[c % PALETTE.len()];
        writeln!(w, r#"<g class="class-{class}" fill="{colour}" fill-opacity="0.7">"#).unwrap();
        for (row, _) in points.row_iter().zip(labels).filter(|(_, l)| *l == class) {
            let px = margin + (row[0] - x0) / (x1 - x0) * plot;
            let py = margin + plot - (row[1] - y0) / (y1 - y0) * plot;
            writeln!(w, r#"<circle cx="{px:.2}" cy="{py:.2}" r="3"/>"#).unwrap();
        }
        writeln!(w, "</g>").unwrap();
        let ly = margin + 15.0 + 18.0 * c as f64;
        writeln!(
            w,
            r#"<circle cx="{:.2}" cy="{ly:.2}" r="4" fill="{colour}"/><text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">class {class}</text>"#,
            size - margin - 70.0,
            size - margin - 62.0,
            ly + 4.0
        )
        .unwrap();
    }
    writeln!(w, "</svg>").unwrap();
    Ok(svg)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tile_shapes() {
        let t = Tile::auto(vec![0.0; 36]);
        assert_eq!((t.width, t.height), (6, 6));
        let t = Tile::auto(vec![0.0; 10]);
        assert_eq!((t.width, t.height), (10, 1));
    }

    #[test]
    fn pgm_round_trip() {
        let rows = vec![
            vec![Tile::auto(vec![0.0, 1.0, 0.5, 0.25]), Tile::auto(vec![1.0; 9])],
            vec![Tile::auto(vec![0.2, 0.4, 0.6])],
        ];
        let img = GrayImage::grid(&rows);
        // widths: 2+2+2+3+2 = 11 ; heights: 2+3+2+1+2 = 10
        assert_eq!((img.width, img.height), (11, 10));
        let text = img.to_pgm();
        assert!(text.starts_with("P2\n11 10\n255\n"));
        assert!(text.lines().all(|l| l.len() <= 70));
        assert_eq!(GrayImage::parse_pgm(&text).unwrap(), img);
        assert_eq!(img.pixels[2 * 11 + 2], 0);
        assert_eq!(img.pixels[2 * 11 + 3], 255);
        assert_eq!(img.pixels[3 * 11 + 2], 128);
    }

    #[test]
    fn wide_rows_wrap() {
        let img = GrayImage::grid(&[vec![Tile::auto(vec![1.0; 100])]]);
        let text = img.to_pgm();
        assert!(text.lines().all(|l| l.len() <= 70));
        assert_eq!(GrayImage::parse_pgm(&text).unwrap(), img);
    }

    #[test]
    fn scatter_contract() {
        let pts = Matrix::from_rows(&[[0.0, 0.0], [1.0, 2.0], [0.5, 1.0]]).unwrap();
        let svg = scatter_svg(&pts, &[0, 1, 1], "t").unwrap();
        assert!(svg.contains(">V1<") && svg.contains(">V2<"));
        assert_eq!(svg.matches("<circle").count(), 3 + 2);
        assert!(svg.contains("class-0") && svg.contains("class-1"));
        assert!(scatter_svg(&Matrix::zeros(3, 3), &[0, 0, 0], "t").unwrap_err().to_string().contains("encoding-dim 2"));
        assert!(scatter_svg(&Matrix::zeros(0, 2), &[], "t").is_err());
    }
}
