"""Configuration, errors, reports and input files"""
