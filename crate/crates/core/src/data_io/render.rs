use crate::packet::packet_grid;
use crate::poset::GradedPoset;

/// ASCII pictorial representation of `P × n`: one line per rank of
/// `P × n` from the top down, one column per rank of `P`, packet sizes
/// right-aligned, blanks where no packet exists. Trailing spaces are
/// trimmed and every line ends in `\n`.
pub fn render_pictorial(p: &GradedPoset, n: usize) -> String {
    let grid = packet_grid(p, n);
    let width = grid
        .counts()
        .values()
        .map(|c| c.to_string().len())
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for y in (0..grid.rows()).rev() {
        let cells: Vec<String> = (0..=grid.base_rank())
            .map(|x| match grid.count(x, y) {
                Some(c) => format!("{c:>width$}"),
                None => " ".repeat(width),
            })
            .collect();
        out.push_str(cells.join(" ").trim_end());
        out.push('\n');
    }
    out
}
