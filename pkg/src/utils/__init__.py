# Utilities: logging, configuration, files, reports
