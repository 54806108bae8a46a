"""This module stores the current version of this library."""

# Do not change this file manually. It is updated automatically by the release script.
VERSION = '0.1.0'
