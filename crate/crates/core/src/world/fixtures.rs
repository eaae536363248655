//! Hand-built worlds used by tests, the CLI and the benchmark suite.

use super::{Gridworld, Region};
use crate::geometry::{ActionCone, Direction, Point};
use crate::rat::Rat;

use Direction::*;

fn region(id: usize, pts: &[(i64, i64)], dirs: &[Direction]) -> Region {
    Region::new(id, pts.iter().map(|&(x, y)| Point::int(x, y)).collect(), ActionCone::of(dirs))
}

/// Five regions on `[0,28]^2` around a small triangular target. The agent
/// starts at the origin and has to wind around the target, gaining two
/// units per lap.
pub fn spiral() -> Gridworld {
    Gridworld {
        side: Rat::from_int(28),
        regions: vec![
            region(0, &[(0, 0), (26, 0), (14, 12), (13, 13)], &[Right, Down]),
            region(1, &[(26, 0), (28, 0), (28, 28), (14, 14), (14, 12)], &[Up]),
            region(2, &[(14, 14), (28, 28), (0, 28)], &[Left]),
            region(3, &[(0, 0), (13, 13), (14, 14), (0, 28)], &[Down]),
            region(4, &[(13, 13), (14, 12), (14, 14)], &[]),
        ],
        initial: Point::int(0, 0),
        target: 4,
    }
}

/// `[0,1]x[0,2]` with `{RIGHT, UP}` next to the target cell `[1,2]x[0,2]`.
pub fn two_cell() -> Gridworld {
    two_cell_with(&[Right, Up])
}

/// [`two_cell`] with a different action set on the non-target cell.
pub fn two_cell_with(left_actions: &[Direction]) -> Gridworld {
    Gridworld {
        side: Rat::from_int(2),
        regions: vec![
            region(0, &[(0, 0), (1, 0), (1, 2), (0, 2)], left_actions),
            region(1, &[(1, 0), (2, 0), (2, 2), (1, 2)], &[Up]),
        ],
        initial: Point::int(0, 0),
        target: 1,
    }
}

/// Alias of [`two_cell`]: two side-by-side rectangles tiling `[0,2]^2`.
pub fn two_squares() -> Gridworld {
    two_cell()
}

/// A triangle with only horizontal actions that the shortest path crosses
/// twice: rightward first, leftward on the way back.
pub fn double_pass_triangle() -> Gridworld {
    Gridworld {
        side: Rat::from_int(12),
        regions: vec![
            region(0, &[(0, 0), (4, 0), (4, 2), (2, 2), (0, 2)], &[]),
            region(1, &[(0, 2), (2, 2), (2, 6), (0, 6)], &[]),
            region(2, &[(0, 6), (2, 6), (2, 12), (0, 12)], &[]),
            region(3, &[(2, 2), (4, 2), (4, 12), (2, 12)], &[Left]),
            region(4, &[(4, 2), (8, 6), (4, 12)], &[Left, Right]),
            region(5, &[(4, 0), (12, 0), (12, 6), (8, 6), (4, 2)], &[Right, Up]),
            region(6, &[(8, 6), (12, 6), (12, 12), (4, 12)], &[Left, Up]),
        ],
        initial: Point::int(4, 3),
        target: 2,
    }
}

/// Region id of the middle triangle in [`double_pass_triangle`].
pub const DOUBLE_PASS_TRIANGLE_ID: usize = 4;
