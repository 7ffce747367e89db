"""Named verifications and their seeded random instances"""
