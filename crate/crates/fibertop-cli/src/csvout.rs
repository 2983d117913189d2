//! Three-column CSV rendering of report rows.

/// Renders `section,name,value` rows under a fixed header. Fields are quoted
/// only when they contain a comma, quote, or newline.
pub fn render(rows: &[(String, String, String)]) -> String {
    let mut out = String::from("section,name,value\n");
    for (section, name, value) in rows {
        out.push_str(&escape(section));
        out.push(',');
        out.push_str(&escape(name));
        out.push(',');
        out.push_str(&escape(value));
        out.push('\n');
    }
    out
}

fn escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
