# Markdown reports and table exports
