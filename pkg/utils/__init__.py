# Utils package for the APGT sparse recovery tool
