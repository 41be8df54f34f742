// filled in during build-out
