//! Raster and vector output for planar point sets.

use quasigrid_core::numeric::{fmt_rational, int};
use quasigrid_core::{Error, PointSet, Rational, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Ppm,
    Svg,
}

#[derive(Clone, Debug)]
pub struct RenderSpec {
    pub pixels_per_unit: u32,
    pub window_radius: Rational,
    pub point_px: u32,
    pub format: Format,
}

impl RenderSpec {
    /// `⌈2 · window_radius · pixels_per_unit⌉`.
    pub fn side(&self) -> Result<usize> {
        let side = (&self.window_radius * int(2 * self.pixels_per_unit as i64))
            .ceil()
            .to_integer();
        usize::try_from(side)
            .ok()
            .filter(|&s| s > 0 && s <= 1 << 15)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "image side for window {} at {} px/unit is out of range",
                    fmt_rational(&self.window_radius),
                    self.pixels_per_unit
                ))
            })
    }
}

/// Top-left pixel of each point inside the window, with `y` pointing up.
fn pixels(set: &PointSet, spec: &RenderSpec, side: usize) -> Vec<(usize, usize)> {
    let ppu = int(spec.pixels_per_unit as i64);
    let w = &spec.window_radius;
    let to_px = |v: Rational| -> Option<usize> {
        let p = (v * &ppu).floor().to_integer();
        usize::try_from(p).ok().filter(|&p| p < side)
    };
    set.iter()
        .filter_map(|p| {
            let c = p.coords();
            let y = c.get(1).cloned().unwrap_or_default();
            Some((to_px(&c[0] + w)?, to_px(w - y)?))
        })
        .collect()
}

fn bitmap(set: &PointSet, spec: &RenderSpec) -> Result<(usize, Vec<bool>)> {
    let side = spec.side()?;
    let mut black = vec![false; side * side];
    let pt = spec.point_px as usize;
    let back = (pt.saturating_sub(1)) / 2;
    for (px, py) in pixels(set, spec, side) {
        let x0 = px.saturating_sub(back);
        let y0 = py.saturating_sub(back);
        for y in y0..(y0 + pt).min(side) {
            for x in x0..(x0 + pt).min(side) {
                black[y * side + x] = true;
            }
        }
    }
    Ok((side, black))
}

/// Binary `P6` image, black points on white.
pub fn to_ppm(set: &PointSet, spec: &RenderSpec) -> Result<Vec<u8>> {
    if set.dim() != 2 {
        return Err(Error::InvalidArgument(format!(
            "raster output needs a planar set, got dimension {}",
            set.dim()
        )));
    }
    let (side, black) = bitmap(set, spec)?;
    let mut out = format!("P6\n{side} {side}\n255\n").into_bytes();
    out.reserve(side * side * 3);
    for b in black {
        let v = if b { 0 } else { 255 };
        out.extend_from_slice(&[v, v, v]);
    }
    Ok(out)
}

/// One filled square per point; lines use the same pixel grid as the raster.
pub fn to_svg(set: &PointSet, spec: &RenderSpec) -> Result<Vec<u8>> {
    if set.dim() > 2 {
        return Err(Error::InvalidArgument(format!(
            "svg output needs dimension 1 or 2, got {}",
            set.dim()
        )));
    }
    let side = spec.side()?;
    let pt = spec.point_px as usize;
    let back = (pt.saturating_sub(1)) / 2;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{side}\" height=\"{side}\" viewBox=\"0 0 {side} {side}\" shape-rendering=\"crispEdges\">\n<rect width=\"{side}\" height=\"{side}\" fill=\"white\"/>\n"
    );
    for (px, py) in pixels(set, spec, side) {
        out.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{pt}\" height=\"{pt}\"/>\n",
            px.saturating_sub(back),
            py.saturating_sub(back)
        ));
    }
    out.push_str("</svg>\n");
    Ok(out.into_bytes())
}

pub fn render(set: &PointSet, spec: &RenderSpec) -> Result<Vec<u8>> {
    match spec.format {
        Format::Ppm => to_ppm(set, spec),
        Format::Svg => to_svg(set, spec),
    }
}

/// Number of black pixels of a `P6` image produced by [`to_ppm`].
pub fn black_pixels(ppm: &[u8]) -> usize {
    let mut newlines = 0;
    let start = ppm
        .iter()
        .position(|&b| {
            newlines += (b == b'\n') as usize;
            newlines == 3
        })
        .map_or(ppm.len(), |i| i + 1);
    ppm[start..].chunks(3).filter(|px| px[0] == 0).count()
}
