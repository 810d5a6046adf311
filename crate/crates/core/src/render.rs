//! SVG drawings of crease patterns in one and two dimensions.
//!
//! Each crease is one `<line>`. Valleys are solid, crests dashed. Output is
//! a pure function of the pattern and style, so equal inputs give
//! byte-identical documents.

use std::fmt::Write as _;

use crate::crease::{CreasePattern, Sign};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderStyle {
    cell_size: u32,
    margin: u32,
    stroke_width: u32,
    valley_color: String,
    crest_color: String,
    /// `stroke-dasharray` value for crests.
    crest_dash: String,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            cell_size: 16,
            margin: 8,
            stroke_width: 2,
            valley_color: "#1f4e9c".into(),
            crest_color: "#c0392b".into(),
            crest_dash: "4 3".into(),
        }
    }
}

impl RenderStyle {
    pub fn new(cell_size: u32, margin: u32, stroke_width: u32) -> Result<Self> {
        if cell_size == 0 || margin == 0 || stroke_width == 0 {
            return Err(Error::Parse(
                "cell size, margin and stroke width must be positive".into(),
            ));
        }
        Ok(RenderStyle {
            cell_size,
            margin,
            stroke_width,
            ..RenderStyle::default()
        })
    }

    pub fn with_colors(mut self, valley: &str, crest: &str) -> Self {
        self.valley_color = valley.into();
        self.crest_color = crest.into();
        self
    }

    pub fn cell_size(&self) -> u32 {
        self.cell_size
    }

    pub fn margin(&self) -> u32 {
        self.margin
    }
}

pub fn render_svg(p: &CreasePattern, style: &RenderStyle) -> Result<String> {
    if p.dim() > 2 {
        return Err(Error::UnsupportedDimension(p.dim()));
    }
    let h = p.extent();
    let cell = style.cell_size as i64;
    let margin = style.margin as i64;
    let width = 2 * h * cell + 2 * margin;
    let height = if p.dim() == 1 {
        cell + 2 * margin
    } else {
        width
    };
    let px = |x: i64| margin + (x + h) * cell;
    let py = |y: i64| margin + (h - y) * cell;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{margin}" y="{margin}" width="{}" height="{}" fill="none" stroke="#bbbbbb" stroke-width="1"/>"##,
        width - 2 * margin,
        height - 2 * margin
    );
    let _ = writeln!(
        svg,
        r#"<g stroke-width="{}" stroke-linecap="butt">"#,
        style.stroke_width
    );
    p.for_each_face(|axis, corner, sign| {
        let (x1, y1, x2, y2) = match (p.dim(), axis) {
            (1, _) => (px(corner[0]), margin, px(corner[0]), margin + cell),
            (_, 0) => (
                px(corner[0]),
                py(corner[1]),
                px(corner[0]),
                py(corner[1] + 1),
            ),
            _ => (
                px(corner[0]),
                py(corner[1]),
                px(corner[0] + 1),
                py(corner[1]),
            ),
        };
        let stroke = match sign {
            Sign::Valley => format!(r#"stroke="{}""#, style.valley_color),
            Sign::Crest => format!(
                r#"stroke="{}" stroke-dasharray="{}""#,
                style.crest_color, style.crest_dash
            ),
        };
        let _ = writeln!(
            svg,
            r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" {stroke}/>"#
        );
    });
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}
