#!/usr/bin/env python3
"""
Main entry point for the sdnb command line
Run as `python scripts/main.py <command> ...`
"""

from sdnb_cli import cli

if __name__ == "__main__":
    cli()
