# Orbit algebra, groups, designs, frames and the catalog
