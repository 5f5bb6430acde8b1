# Core model package for the APGT sparse recovery tool
