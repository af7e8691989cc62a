use alloc::vec::Vec;

/// One block of a swap region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Part<T> {
    /// The block the movers are reflected around.
    Anchor(T),
    /// A block that changes sides.
    Mover(T),
    /// Material in the region that belongs to neither; it keeps its order
    /// relative to the anchor.
    Fixed(T),
}

impl<T> Part<T> {
    pub fn into_inner(self) -> T {
        match self {
            Part::Anchor(t) | Part::Mover(t) | Part::Fixed(t) => t,
        }
    }

    pub fn is_mover(&self) -> bool {
        matches!(self, Part::Mover(_))
    }
}

/// Moves every mover to the other side of the anchor while keeping its
/// distance rank: `H D1 D2` becomes `D2 D1 H`, `D1 D2 H` becomes `H D2 D1`,
/// and with movers on both sides each side is mirrored independently.
///
/// Fixed parts stay glued to the anchor in their original order. Without
/// fixed parts the operation is an involution. An arrangement without an
/// anchor is returned unchanged.
pub fn reflect_dependents<T>(arrangement: Vec<Part<T>>) -> Vec<Part<T>> {
    let Some(anchor_at) = arrangement
        .iter()
        .position(|p| matches!(p, Part::Anchor(_)))
    else {
        return arrangement;
    };

    let mut left = Vec::new();
    let mut middle = Vec::new();
    let mut right = Vec::new();
    for (i, part) in arrangement.into_iter().enumerate() {
        match part {
            Part::Mover(_) if i < anchor_at => left.push(part),
            Part::Mover(_) => right.push(part),
            _ => middle.push(part),
        }
    }

    let mut out = Vec::with_capacity(left.len() + middle.len() + right.len());
    out.extend(right.into_iter().rev());
    out.extend(middle);
    out.extend(left.into_iter().rev());
    out
}
