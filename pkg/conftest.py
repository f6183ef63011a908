# examples/ holds vendored reference files, not this project's tests
collect_ignore = ["examples"]
