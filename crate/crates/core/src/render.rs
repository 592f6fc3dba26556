//! SVG drawings of strip layouts.

use std::fmt::Write as _;

use crate::error::ValidationError;
use crate::instance::{Instance, Rotation};
use crate::solution::Solution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Palette {
    /// One hue per box type.
    #[default]
    ByType,
    Gray,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderSpec {
    /// Pixels per length unit.
    pub scale: u32,
    pub palette: Palette,
    /// Write the box type id in each rectangle.
    pub labels: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            scale: 10,
            palette: Palette::ByType,
            labels: false,
        }
    }
}

fn fill(palette: Palette, box_id: u32) -> String {
    match palette {
        Palette::ByType => {
            let hue = (box_id as u64 * 137) % 360;
            let light = 55 + (box_id as u64 * 7) % 20;
            format!("hsl({hue},65%,{light}%)")
        }
        Palette::Gray => "#c8c8c8".to_string(),
    }
}

/// Draws `solution` with the strip bottom at the bottom of the canvas. The
/// canvas is `scale * W` by `scale * usedLength`. Refuses layouts that do
/// not validate against `instance`.
pub fn render_svg(
    instance: &Instance,
    solution: &Solution,
    rotation: Rotation,
    spec: &RenderSpec,
) -> Result<String, ValidationError> {
    solution.validate(instance, rotation)?;
    let s = spec.scale.max(1);
    let width = solution.strip_width * s;
    let height = solution.used_length * s;
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(out, "<title>{} length {}</title>", escape(&instance.name), solution.used_length).unwrap();
    writeln!(
        out,
        r##"<rect class="strip" x="0" y="0" width="{width}" height="{height}" fill="#ffffff" stroke="#000000" stroke-width="1"/>"##
    )
    .unwrap();
    for p in &solution.placements {
        let r = p.rect;
        let x = r.x * s;
        let y = (solution.used_length - r.top()) * s;
        let (w, h) = (r.w * s, r.h * s);
        writeln!(
            out,
            r##"<rect class="box" data-box="{}" x="{x}" y="{y}" width="{w}" height="{h}" fill="{}" stroke="#333333" stroke-width="1"/>"##,
            p.box_id,
            fill(spec.palette, p.box_id)
        )
        .unwrap();
        if spec.labels {
            let font = (w.min(h) / 2).clamp(4, 16);
            writeln!(
                out,
                r#"<text x="{}" y="{}" font-size="{font}" text-anchor="middle" dominant-baseline="central">{}</text>"#,
                x + w / 2,
                y + h / 2,
                p.box_id
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
