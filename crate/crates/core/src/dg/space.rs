use crate::mesh::{SimplexMesh, SpaceTimeMesh};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    /// Discontinuous linear vector fields, one value per element vertex and
    /// component.
    VelocityP1Vector,
    /// One value per element.
    PressureP0,
}

/// Fully discontinuous finite element space on a space-time mesh.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DgSpace {
    pub kind: SpaceKind,
    pub num_elements: usize,
    /// Spatial dimension `d`; elements have `d + 2` vertices.
    pub space_dim: usize,
}

impl DgSpace {
    pub fn new<T: Real>(mesh: &SpaceTimeMesh<T>, kind: SpaceKind) -> Self {
        Self {
            kind,
            num_elements: mesh.num_elements(),
            space_dim: mesh.space_dim(),
        }
    }

    pub fn dofs_per_element(&self) -> usize {
        match self.kind {
            SpaceKind::VelocityP1Vector => (self.space_dim + 2) * self.space_dim,
            SpaceKind::PressureP0 => 1,
        }
    }

    pub fn num_dofs(&self) -> usize {
        self.num_elements * self.dofs_per_element()
    }

    /// Global dofs of element `e`, contiguous.
    pub fn element_dofs(&self, e: usize) -> std::ops::Range<usize> {
        let k = self.dofs_per_element();
        e * k..(e + 1) * k
    }
}

/// Index of component `c` at local vertex `a` of element `e`.
#[inline]
pub fn velocity_dof(e: usize, a: usize, c: usize, space_dim: usize) -> usize {
    (e * (space_dim + 2) + a) * space_dim + c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DofCount {
    pub velocity: usize,
    pub pressure: usize,
}

impl DofCount {
    pub fn total(&self) -> usize {
        self.velocity + self.pressure
    }
}

/// Degrees of freedom of the `P1`/`P0` pair on `num_elements` space-time
/// simplices over a `d`-dimensional spatial domain.
pub fn count_dofs(num_elements: usize, space_dim: usize) -> DofCount {
    DofCount {
        velocity: num_elements * (space_dim + 2) * space_dim,
        pressure: num_elements,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentatope_counts() {
        assert_eq!(count_dofs(951_360, 3).velocity, 14_270_400);
        assert_eq!(count_dofs(2_618_880, 3).velocity, 39_283_200);
        assert_eq!(count_dofs(10, 1), DofCount { velocity: 30, pressure: 10 });
    }

    #[test]
    fn dof_layout_is_element_major() {
        let s = DgSpace {
            kind: SpaceKind::VelocityP1Vector,
            num_elements: 3,
            space_dim: 2,
        };
        assert_eq!(s.num_dofs(), 24);
        assert_eq!(velocity_dof(1, 0, 0, 2), 8);
        assert_eq!(s.element_dofs(1), 8..16);
        assert_eq!(velocity_dof(2, 3, 1, 2), 23);
    }
}
