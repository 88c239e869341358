# Test harness: numbering and slow-test markers, a JSON result writer, and a timeout guard.
