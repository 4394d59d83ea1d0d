# Core modules: streams, frequencies, classification, transforms, measures, dimensions
