use num::traits::Signed;

use crate::error::{Error, Result};
use crate::numeric::{rat, Interval, IntervalBox, RVector, Rational};

/// Acceptance region in internal space: a finite union of boxes with
/// per-face open/closed flags. In dimension zero the window is the single
/// point of `R^0`, so the acceptance condition is vacuous.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    dim: usize,
    boxes: Vec<IntervalBox>,
}

impl Window {
    pub fn new(dim: usize, boxes: Vec<IntervalBox>) -> Result<Self> {
        if boxes.is_empty() {
            return Err(Error::InvalidArgument("window needs at least one box".into()));
        }
        for b in &boxes {
            Error::check_dim(dim, b.dim())?;
            if b.is_empty() {
                return Err(Error::InvalidArgument("window boxes must be nonempty".into()));
            }
        }
        Ok(Window { dim, boxes })
    }

    /// The window of a scheme without internal space.
    pub fn vacuous() -> Self {
        Window {
            dim: 0,
            boxes: vec![IntervalBox::from_axes_unchecked(Vec::new())],
        }
    }

    /// `[-eta, eta]^dim`
    pub fn closed_cube(dim: usize, eta: &Rational) -> Result<Self> {
        if !eta.is_positive() {
            return Err(Error::InvalidArgument(
                "window half-width must be positive".into(),
            ));
        }
        if dim == 0 {
            return Ok(Window::vacuous());
        }
        Window::new(dim, vec![IntervalBox::cube_closed(&RVector::zeros(dim), eta)])
    }

    /// `]-1/2, 1/2]^dim`, the acceptance region of the rounding map.
    pub fn rounding_cell(dim: usize) -> Self {
        if dim == 0 {
            return Window::vacuous();
        }
        Window {
            dim,
            boxes: vec![IntervalBox::from_axes_unchecked(
                (0..dim)
                    .map(|_| Interval::half_open(rat(-1, 2), rat(1, 2)))
                    .collect(),
            )],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[IntervalBox] {
        &self.boxes
    }

    pub fn contains(&self, p: &RVector) -> bool {
        self.boxes.iter().any(|b| b.contains(p))
    }

    /// `self × other` (union of pairwise box products).
    pub fn product(&self, other: &Window) -> Window {
        let boxes = self
            .boxes
            .iter()
            .flat_map(|a| other.boxes.iter().map(move |b| a.product(b)))
            .collect();
        Window {
            dim: self.dim + other.dim,
            boxes,
        }
    }

    /// Box-union surrogate of the closed `eta`-tube around the boundary:
    /// the union of inflated boxes minus the union of deflated boxes.
    /// Returns `None` when the tube is empty (always the case in dimension
    /// zero, where the boundary is empty).
    pub fn boundary_tube(&self, eta: &Rational) -> Result<Option<Window>> {
        if !eta.is_positive() {
            return Err(Error::InvalidArgument("tube width must be positive".into()));
        }
        if self.dim == 0 {
            return Ok(None);
        }
        let mut pieces: Vec<IntervalBox> = self.boxes.iter().map(|b| b.inflate(eta)).collect();
        for inner in self.boxes.iter().map(|b| b.deflate(eta)) {
            if inner.is_empty() {
                continue;
            }
            pieces = pieces.iter().flat_map(|p| p.subtract(&inner)).collect();
        }
        if pieces.is_empty() {
            return Ok(None);
        }
        Ok(Some(Window {
            dim: self.dim,
            boxes: pieces,
        }))
    }

    /// Replaces every face flag by `closed`; used to build deliberately
    /// wrong windows when testing the verification pipeline.
    pub fn with_all_faces_closed(&self) -> Window {
        Window {
            dim: self.dim,
            boxes: self.boxes.iter().map(IntervalBox::closure).collect(),
        }
    }
}
