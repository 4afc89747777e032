"""Command implementations: one function per CLI command, each returning a result dict."""
