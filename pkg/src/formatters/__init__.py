# Report formatters for different output types