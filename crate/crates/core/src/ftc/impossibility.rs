//! Exhaustive search for a triangle analogue of the rectangle vertex sum.
//!
//! Rectangle corners are indexed `A = 0 = (a₁,a₂)`, `B = 1 = (b₁,a₂)`,
//! `C = 2 = (b₁,b₂)`, `D = 3 = (a₁,b₂)`, in cyclic order.

use std::collections::BTreeSet;

pub const CORNER_NAMES: [char; 4] = ['A', 'B', 'C', 'D'];

/// Coefficients of `F(A), F(B), F(C), F(D)` in the rectangle vertex sum.
pub const EQ2_PATTERN: [i32; 4] = [1, -1, 1, -1];

const SLOTS: usize = 6;
const ASSIGNMENTS: u32 = 1 << SLOTS;

/// Split of the rectangle along one diagonal into two triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triangulation {
    pub name: &'static str,
    pub diagonal: [usize; 2],
    pub triangles: [[usize; 3]; 2],
}

impl Triangulation {
    pub const AC: Triangulation = Triangulation {
        name: "AC",
        diagonal: [0, 2],
        triangles: [[0, 1, 2], [0, 2, 3]],
    };
    pub const BD: Triangulation = Triangulation {
        name: "BD",
        diagonal: [1, 3],
        triangles: [[0, 1, 3], [1, 2, 3]],
    };

    pub fn all() -> [Triangulation; 2] {
        [Self::AC, Self::BD]
    }

    fn slot_corner(&self, slot: usize) -> usize {
        self.triangles[slot / 3][slot % 3]
    }

    /// Corner coefficients induced by a ±1 assignment to the six triangle
    /// vertex slots; bit `k` of `mask` set means slot `k` carries `−1`.
    pub fn coefficients(&self, mask: u32) -> [i32; 4] {
        let mut c = [0; 4];
        for slot in 0..SLOTS {
            c[self.slot_corner(slot)] += if mask >> slot & 1 == 1 { -1 } else { 1 };
        }
        c
    }

    pub fn is_shared(&self, corner: usize) -> bool {
        self.diagonal.contains(&corner)
    }
}

/// The 8 symmetries of the rectangle's corner cycle as permutations
/// `i ↦ σ(i)`: rotations `i + k` and reflections `k − i`, mod 4.
pub fn rectangle_symmetries() -> [[usize; 4]; 8] {
    let mut out = [[0; 4]; 8];
    for k in 0..4 {
        out[k] = std::array::from_fn(|i| (i + k) % 4);
        out[k + 4] = std::array::from_fn(|i| (k + 4 - i) % 4);
    }
    out
}

fn images(pattern: &[i32; 4]) -> BTreeSet<[i32; 4]> {
    rectangle_symmetries()
        .iter()
        .map(|sigma| {
            let mut img = [0; 4];
            for i in 0..4 {
                img[sigma[i]] = pattern[i];
            }
            img
        })
        .collect()
}

/// Number of the 64 assignments whose coefficient vector equals `target`
/// up to a rectangle symmetry.
pub fn count_matching_assignments(t: &Triangulation, target: &[i32; 4]) -> usize {
    let targets = images(target);
    (0..ASSIGNMENTS)
        .filter(|&mask| targets.contains(&t.coefficients(mask)))
        .count()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangulationSearch {
    pub triangulation: Triangulation,
    pub assignments: usize,
    pub matches: usize,
    /// Every coefficient seen on the two diagonal corners.
    pub shared_coefficients: BTreeSet<i32>,
    /// Every coefficient seen on the two off-diagonal corners.
    pub unshared_coefficients: BTreeSet<i32>,
    /// Assignments whose coefficient vector is identically zero.
    pub zero_vector_matches: usize,
    /// Assignments where both slots of each diagonal corner cancel.
    pub shared_cancel_matches: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImpossibilityReport {
    pub target: [i32; 4],
    pub symmetries: usize,
    pub distinct_targets: usize,
    pub searches: Vec<TriangulationSearch>,
    /// No assignment in any triangulation reproduces the target.
    pub claim_holds: bool,
}

impl ImpossibilityReport {
    pub fn total_matches(&self) -> usize {
        self.searches.iter().map(|s| s.matches).sum()
    }
}

fn search(t: Triangulation) -> TriangulationSearch {
    let mut shared = BTreeSet::new();
    let mut unshared = BTreeSet::new();
    let mut shared_cancel = 0;
    for mask in 0..ASSIGNMENTS {
        let c = t.coefficients(mask);
        for (corner, &v) in c.iter().enumerate() {
            if t.is_shared(corner) {
                shared.insert(v);
            } else {
                unshared.insert(v);
            }
        }
        if t.diagonal.iter().all(|&k| c[k] == 0) {
            shared_cancel += 1;
        }
    }
    TriangulationSearch {
        triangulation: t,
        assignments: ASSIGNMENTS as usize,
        matches: count_matching_assignments(&t, &EQ2_PATTERN),
        shared_coefficients: shared,
        unshared_coefficients: unshared,
        zero_vector_matches: count_matching_assignments(&t, &[0; 4]),
        shared_cancel_matches: shared_cancel,
    }
}

pub fn triangle_impossibility_check() -> ImpossibilityReport {
    let searches: Vec<_> = Triangulation::all().into_iter().map(search).collect();
    let claim_holds = searches.iter().all(|s| s.matches == 0);
    ImpossibilityReport {
        target: EQ2_PATTERN,
        symmetries: rectangle_symmetries().len(),
        distinct_targets: images(&EQ2_PATTERN).len(),
        searches,
        claim_holds,
    }
}
