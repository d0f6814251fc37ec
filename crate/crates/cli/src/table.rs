//! Output formatting: RFC-4180-style CSV ('.' decimal separator, '\n'
//! line endings, header row always present) and aligned pretty tables,
//! plus the fixed-size ASCII plot behind the figure data.

/// How a column's numbers are rendered.
#[derive(Clone, Copy)]
pub enum ColumnKind {
    Integer,
    /// Fixed-point at the configured precision.
    Fixed,
    /// Scientific at the configured precision (residuals, deviations).
    Scientific,
}

pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Empty,
}

pub struct Table {
    pub headers: Vec<&'static str>,
    pub kinds: Vec<ColumnKind>,
    pub rows: Vec<Vec<Cell>>,
    pub precision: usize,
}

impl Table {
    pub fn new(headers: Vec<&'static str>, kinds: Vec<ColumnKind>, precision: usize) -> Self {
        assert_eq!(headers.len(), kinds.len());
        Table {
            headers,
            kinds,
            rows: Vec::new(),
            precision,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn render_cell(&self, cell: &Cell, kind: ColumnKind) -> String {
        match (cell, kind) {
            (Cell::Empty, _) => String::new(),
            (Cell::Int(v), _) => format!("{v}"),
            (Cell::Text(s), _) => s.clone(),
            (Cell::Num(v), ColumnKind::Integer) => format!("{}", *v as i64),
            (Cell::Num(v), ColumnKind::Fixed) => format!("{:.*}", self.precision, v),
            (Cell::Num(v), ColumnKind::Scientific) => format!("{:.*e}", self.precision, v),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.headers.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .zip(&self.kinds)
                .map(|(cell, &kind)| self.render_cell(cell, kind))
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_pretty(&self) -> String {
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.kinds)
                    .map(|(cell, &kind)| self.render_cell(cell, kind))
                    .collect()
            })
            .collect();
        let widths: Vec<usize> = self
            .headers
            .iter()
            .enumerate()
            .map(|(i, h)| {
                rendered
                    .iter()
                    .map(|r| r[i].len())
                    .fold(h.len(), usize::max)
            })
            .collect();
        let mut out = String::new();
        for (i, h) in self.headers.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(&format!("{:>width$}", h, width = widths[i]));
        }
        out.push('\n');
        for row in &rendered {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push_str("  ");
                }
                out.push_str(&format!("{:>width$}", cell, width = widths[i]));
            }
            out.push('\n');
        }
        out
    }
}

const PLOT_WIDTH: usize = 64;
const PLOT_HEIGHT: usize = 16;

/// Fixed 64x16 character plot of a sampled solution with min/max
/// annotations; the data behind the figures, not their rendering.
pub fn ascii_plot(values: &[f64], precision: usize) -> String {
    if values.is_empty() {
        return String::new();
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if max > min { max - min } else { 1.0 };
    let mut grid = vec![vec![b' '; PLOT_WIDTH]; PLOT_HEIGHT];
    for (i, &v) in values.iter().enumerate() {
        let col = if values.len() > 1 {
            i * (PLOT_WIDTH - 1) / (values.len() - 1)
        } else {
            0
        };
        let level = ((v - min) / span * (PLOT_HEIGHT - 1) as f64).round() as usize;
        let row = PLOT_HEIGHT - 1 - level.min(PLOT_HEIGHT - 1);
        grid[row][col] = b'*';
    }
    let mut out = String::new();
    out.push_str(&format!("max = {:.*}\n", precision, max));
    for row in grid {
        out.push_str(std::str::from_utf8(&row).unwrap());
        out.push('\n');
    }
    out.push_str(&format!("min = {:.*}\n", precision, min));
    out
}
