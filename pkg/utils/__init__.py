# Formatting helpers
