use serde::{Deserialize, Serialize};

/// A region of a source file.
///
/// Offsets are character indices into the decoded text (end exclusive).
/// Lines are 1-based, columns 0-based and counted in characters; a tab is
/// one column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SourceSpan {
    pub start_offset: usize,
    pub end_offset: usize,
    pub start_line: usize,
    pub end_line: usize,
    pub start_col: usize,
    pub end_col: usize,
}

impl SourceSpan {
    pub fn len(&self) -> usize {
        self.end_offset - self.start_offset
    }

    pub fn is_empty(&self) -> bool {
        self.start_offset == self.end_offset
    }

    /// True if `other` lies entirely inside `self`.
    pub fn contains(&self, other: &SourceSpan) -> bool {
        self.start_offset <= other.start_offset && other.end_offset <= self.end_offset
    }

    pub fn overlaps(&self, other: &SourceSpan) -> bool {
        self.start_offset < other.end_offset && other.start_offset < self.end_offset
    }

    /// Smallest span covering both.
    pub fn hull(&self, other: &SourceSpan) -> SourceSpan {
        let (start, start_line, start_col) = if other.start_offset < self.start_offset {
            (other.start_offset, other.start_line, other.start_col)
        } else {
            (self.start_offset, self.start_line, self.start_col)
        };
        let (end, end_line, end_col) = if other.end_offset > self.end_offset {
            (other.end_offset, other.end_line, other.end_col)
        } else {
            (self.end_offset, self.end_line, self.end_col)
        };
        SourceSpan {
            start_offset: start,
            end_offset: end,
            start_line,
            end_line,
            start_col,
            end_col,
        }
    }
}

/// Position bookkeeping for one file: maps byte offsets (what the grammar
/// backend reports) to character offsets, lines and columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineIndex {
    line_start_bytes: Vec<usize>,
    line_start_chars: Vec<usize>,
    total_bytes: usize,
    total_chars: usize,
}

impl LineIndex {
    pub fn new(text: &str) -> Self {
        let mut line_start_bytes = vec![0];
        let mut line_start_chars = vec![0];
        let mut chars = 0;
        for (byte, ch) in text.char_indices() {
            chars += 1;
            if ch == '\n' {
                line_start_bytes.push(byte + 1);
                line_start_chars.push(chars);
            }
        }
        LineIndex {
            line_start_bytes,
            line_start_chars,
            total_bytes: text.len(),
            total_chars: chars,
        }
    }

    /// Number of lines; a trailing newline does not open a new line.
    pub fn line_count(&self) -> usize {
        let n = self.line_start_bytes.len();
        if n > 1 && self.line_start_bytes[n - 1] == self.total_bytes {
            n - 1
        } else if self.total_bytes == 0 {
            0
        } else {
            n
        }
    }

    pub fn total_chars(&self) -> usize {
        self.total_chars
    }

    /// Character offset of the first character of a 1-based line.
    pub fn line_start(&self, line: usize) -> Option<usize> {
        self.line_start_chars.get(line.checked_sub(1)?).copied()
    }

    /// Byte offset of the first character of a 1-based line.
    pub fn line_start_byte(&self, line: usize) -> Option<usize> {
        self.line_start_bytes.get(line.checked_sub(1)?).copied()
    }

    /// (char offset, 1-based line, 0-based column) for a byte offset.
    pub fn locate(&self, text: &str, byte: usize) -> (usize, usize, usize) {
        let line_idx = match self.line_start_bytes.binary_search(&byte) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let line_start = self.line_start_bytes[line_idx];
        let col = text[line_start..byte].chars().count();
        (self.line_start_chars[line_idx] + col, line_idx + 1, col)
    }

    pub fn span(&self, text: &str, start_byte: usize, end_byte: usize) -> SourceSpan {
        let (start_offset, start_line, start_col) = self.locate(text, start_byte);
        let (end_offset, end_line, end_col) = self.locate(text, end_byte);
        SourceSpan {
            start_offset,
            end_offset,
            start_line,
            end_line,
            start_col,
            end_col,
        }
    }

    /// Byte offset of a character offset.
    pub fn byte_of(&self, text: &str, char_offset: usize) -> usize {
        if char_offset >= self.total_chars {
            return self.total_bytes;
        }
        let line_idx = match self.line_start_chars.binary_search(&char_offset) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let base_byte = self.line_start_bytes[line_idx];
        let skip = char_offset - self.line_start_chars[line_idx];
        text[base_byte..]
            .char_indices()
            .nth(skip)
            .map_or(self.total_bytes, |(b, _)| base_byte + b)
    }
}
